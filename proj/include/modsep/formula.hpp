#pragma once

#include <cstddef>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "modsep/signature.hpp"

namespace modsep {

class KripkeTree;

enum class Kind { True, False, Prop, Not, And, Or, Dia, Box, Var, Mu, Nu };

// Immutable formula value. Diamonds carry a grade >= 1 (plain diamond = 1),
// boxes a grade >= 0 (plain box = 0). A proposition node may be negated.
class Formula {
 public:
  Formula();  // true

  Kind kind() const { return node_->kind; }
  const std::string& name() const { return node_->name; }
  bool negated() const { return node_->negated; }
  int grade() const { return node_->grade; }
  const std::vector<Formula>& args() const { return node_->args; }
  const Formula& body() const { return node_->args.front(); }
  std::size_t hash() const { return node_->hash; }

  bool is_binder() const { return kind() == Kind::Mu || kind() == Kind::Nu; }
  bool is_modal() const { return kind() == Kind::Dia || kind() == Kind::Box; }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  static Formula top();
  static Formula bottom();
  static Formula prop(std::string name, bool negated = false);
  static Formula var(std::string name);
  static Formula neg(Formula f);
  // n-ary; nested operands of the same kind are spliced in, empty lists give true/false.
  static Formula conj(std::vector<Formula> fs);
  static Formula disj(std::vector<Formula> fs);
  static Formula conj(Formula a, Formula b) { return conj(std::vector<Formula>{std::move(a), std::move(b)}); }
  static Formula disj(Formula a, Formula b) { return disj(std::vector<Formula>{std::move(a), std::move(b)}); }
  static Formula dia(Formula f, int grade = 1);
  static Formula box(Formula f, int grade = 0);
  static Formula mu(std::string var, Formula body);
  static Formula nu(std::string var, Formula body);
  static Formula implies(Formula a, Formula b) { return disj(neg(std::move(a)), std::move(b)); }
  // nabla(S) = conj(<>s for s in S) & [](disj S)
  static Formula nabla(const std::vector<Formula>& fs);
  // <>^k f and []^k f
  static Formula dia_power(Formula f, int k);
  static Formula box_power(Formula f, int k);

 private:
  struct Node {
    Kind kind = Kind::True;
    std::string name;
    bool negated = false;
    int grade = 0;
    std::vector<Formula> args;
    std::size_t hash = 0;
  };
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  static Formula make(Kind k, std::string name, bool negated, int grade, std::vector<Formula> args);

  std::shared_ptr<const Node> node_;
};

struct FormulaHash {
  std::size_t operator()(const Formula& f) const { return f.hash(); }
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

Formula parse_formula(const std::string& text);
// Canonical printer; parse_formula(to_string(f)) == f for normalized f.
std::string to_string(const Formula& f);

// Negation normal form with binders renamed apart. Idempotent.
Formula normalize(const Formula& f);
bool is_normalized(const Formula& f);

struct Metrics {
  int depth = 0;
  Signature sig;
  std::size_t size = 0;
};
Metrics metrics(const Formula& f);
int modal_depth(const Formula& f);
Signature signature_of(const Formula& f);
std::size_t formula_size(const Formula& f);

bool is_modal_logic(const Formula& f);  // no fixpoints
bool is_graded(const Formula& f);       // some grade other than the plain ones
// Largest grade in use, counting a box of grade g as g+1; at least 1.
int max_grade(const Formula& f);

// Sum of the grades of the distinct diamond subformulas of normalize(f), at least 1. A satisfiable
// formula has a tree model of this outdegree (keep only the diamond witnesses at each node).
int witness_degree(const Formula& f);

// Collapse all grades: diamonds to 1, boxes to 0.
Formula flatten(const Formula& f);

// Constant folding, flattening, duplicate and absorption removal. Semantics-preserving.
Formula simplify(const Formula& f);

// Formula true exactly in the trees that are (sigma,n)-bisimilar to m.
Formula characteristic_formula(const KripkeTree& m, const Signature& sigma, int n);

Formula theta_inf();       // nu X. <>X
Formula theta_d(int d);    // nu X. ([]X & [d]false)

struct GadgetPair {
  Formula left;
  Formula right;
};
GadgetPair gadget(int i);

// Conjunction of literals describing letter c over sigma.
Formula letter_formula(Letter c, const Signature& sigma);

}  // namespace modsep
