#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "modsep/budget.hpp"
#include "modsep/kripke.hpp"
#include "modsep/signature.hpp"

namespace modsep {

enum class TransitionMode { Tuple, Set };

using StateTuple = std::vector<int>;

// Nondeterministic parity tree automaton over the alphabet 2^sigma.
//
// Tuple mode: transitions are multisets of at most `arity` states (stored sorted); a node with
// children v1..vk is consistent with a transition if the children's states are a permutation of it.
// Set mode: transitions are sets of states; the set of children's states must equal it.
// Acceptance: max-parity on every infinite path.
class Npta {
 public:
  Npta() = default;
  Npta(Signature sigma, TransitionMode mode, int arity);

  const Signature& sigma() const { return sigma_; }
  TransitionMode mode() const { return mode_; }
  int arity() const { return arity_; }  // -1 in set mode
  std::size_t size() const { return priority_.size(); }
  std::size_t letter_count() const { return std::size_t{1} << sigma_.size(); }
  int initial() const { return initial_; }
  int priority(int q) const { return priority_[q]; }
  const std::string& name(int q) const { return names_[q]; }
  const std::vector<StateTuple>& transitions(int q, Letter c) const { return delta_[q][c]; }
  std::size_t transition_count() const;

  int add_state(std::string name, int priority);
  void set_initial(int q) { initial_ = q; }
  void set_priority(int q, int p) { priority_[q] = p; }
  // Canonicalizes the tuple; duplicates are ignored.
  void add_transition(int q, Letter c, StateTuple t);

  // Same automaton with a different initial state.
  Npta with_initial(int q) const;

 private:
  Signature sigma_;
  TransitionMode mode_ = TransitionMode::Tuple;
  int arity_ = 0;
  int initial_ = 0;
  std::vector<std::string> names_;
  std::vector<int> priority_;
  std::vector<std::vector<std::vector<StateTuple>>> delta_;
};

Npta parse_npta(const std::string& text);
std::string to_string(const Npta& a);

// Finite-tree automaton for prefix-style languages. Internal nodes follow `transitions`;
// a leaf at a cut point needs leaf_cut, a leaf that is a real leaf needs leaf_real.
struct FinTreeAutomaton {
  Signature sigma;
  TransitionMode mode = TransitionMode::Tuple;
  int arity = 0;
  int initial = 0;
  std::vector<std::vector<std::vector<StateTuple>>> delta;  // [q][c] -> non-empty tuples
  std::vector<std::vector<char>> leaf_cut;                   // [q][c]
  std::vector<std::vector<char>> leaf_real;                  // [q][c]
  std::vector<std::string> names;

  std::size_t size() const { return delta.size(); }
  std::size_t letter_count() const { return std::size_t{1} << sigma.size(); }
  bool empty() const { return delta.empty(); }
};

struct Emptiness {
  bool empty = true;
  std::vector<char> live;  // live[q]: the automaton started in q accepts some tree
};
Emptiness emptiness(const Npta& a);
bool is_empty(const Npta& a);

// Acceptance of a finite tree (every leaf is a real leaf, no parity condition applies).
bool accepts_finite(const Npta& a, const KripkeTree& t);

// Finite full prefixes (each node keeps all or none of its children) of sigma-reducts of members of L(a).
FinTreeAutomaton prefix_automaton(const Npta& a, const Signature& sigma);

// Leaves at depth cut_depth (or every leaf when cut_depth < 0) are cut points; shallower leaves are real.
bool accepts(const FinTreeAutomaton& b, const KripkeTree& t, int cut_depth = -1);

// Tallness chain S_0 ⊇ S_1 ⊇ ... on the product of two prefix automata.
struct ConsistencyReport {
  bool all_n = false;            // jointly consistent for every n
  int first_failure = -1;        // least n with the initial pair outside S_n, or -1
  int bound = 0;                 // m = |A| x |A'| + 1
  int product_size = 0;          // |B|
  int stabilized_at = 0;         // least i with S_i = S_{i+1}
  std::vector<std::size_t> chain_sizes;  // |S_0|, |S_1|, ...
  std::vector<std::vector<char>> levels;  // S_0 .. S_stabilized_at over pairs p * |right| + p'
};
ConsistencyReport tallness_chain(const FinTreeAutomaton& left, const FinTreeAutomaton& right, int bound,
                                 Budget& budget = Budget::unlimited());
// Joint (sigma,n)-isomorphism consistency for every n, over trees of the automata's arity.
ConsistencyReport consistency_report(const Npta& a, const Npta& a2, const Signature& sigma,
                                     Budget& budget = Budget::unlimited());
bool consistency_for_all_n(const Npta& a, const Npta& a2, const Signature& sigma, int d);

// A sigma-tree of tallness >= n lying in both prefix languages, read off the chain levels.
std::optional<KripkeTree> common_prefix(const FinTreeAutomaton& left, const FinTreeAutomaton& right,
                                        const ConsistencyReport& report, int n);

enum class LiftMode { Isomorphic, Preimage };
// A tree over sig(a) united with sigma that is a prefix of a member of L(a) and whose sigma-reduct is
// t (Isomorphic) or maps onto t by a functional bisimulation (Preimage). Leaves of t at depth
// cut_depth are cut points, shallower leaves are real leaves.
std::optional<KripkeTree> lift_prefix(const Npta& a, const KripkeTree& t, const Signature& sigma, int cut_depth,
                                      LiftMode mode = LiftMode::Isomorphic);

// Some prefix of an accepted tree, cut at the given depth (real leaves preferred), or nullopt if empty.
std::optional<KripkeTree> witness_prefix(const Npta& a, int depth);

// Adds (p,p) next to every singleton transition (p).
Npta duplication_safe_closure(const Npta& a);
bool is_duplication_safe(const Npta& a);

class UnsupportedAutomaton : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Automaton for the bisimulation quotients of L(a). Requires a Büchi-shaped or single-parity
// priority structure; otherwise UnsupportedAutomaton.
Npta quotient_automaton(const Npta& a, Budget& budget = Budget::unlimited());
// Bisimulation quotients of finite full prefixes of sigma-reducts of members of L(a).
FinTreeAutomaton qpl_automaton(const Npta& a, const Signature& sigma, Budget& budget = Budget::unlimited());
// Same language as qpl_automaton(prefix) membership, decided directly on one tree.
bool qpl_member(const FinTreeAutomaton& prefix, const KripkeTree& t, int cut_depth = -1);

}  // namespace modsep
