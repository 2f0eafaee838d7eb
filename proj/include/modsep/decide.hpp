#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "modsep/automata.hpp"
#include "modsep/budget.hpp"
#include "modsep/formula.hpp"
#include "modsep/kripke.hpp"
#include "modsep/model_class.hpp"

namespace modsep {

// Two model prefixes whose n-prefixes are (sigma,n)-bisimilar, the left one from a model of the
// first formula and the right one from a model of the second.
struct Evidence {
  int n = 0;
  Signature sigma;
  KripkeTree left;
  KripkeTree right;
};

struct Trace {
  int degree = -1;          // outdegree of the trees the automata read (-1: unbounded)
  int bound = 0;            // m = |A| x |A'| + 1
  int depth_bound = -1;     // first n at which joint consistency fails, or -1
  int stabilized_at = -1;   // index at which the tallness chain became stable
  int product_size = 0;
  std::vector<std::string> notes;
};

struct Verdict {
  bool decision = false;
  std::string label;                    // e.g. SEPARABLE, NOT_SEPARABLE
  std::optional<Formula> separator;     // separator, interpolant or equivalent formula
  bool verified = false;                // separator passed verify_separator
  std::optional<Evidence> evidence;     // for negative verdicts
  std::optional<KripkeTree> counterexample;  // a tree distinguishing two formulas, when relevant
  Trace trace;
};

// Separability of two mu-calculus formulas by a modal formula over sigma (default: the union of
// their signatures) over the class.
Verdict decide_separability(const Formula& phi, const Formula& phi2, const ModelClass& c,
                            const std::optional<Signature>& sigma = std::nullopt, Budget& budget = Budget::unlimited());

// Does phi have a modal equivalent over the class? Decided as separability of phi and its negation.
Verdict decide_definability(const Formula& phi, const ModelClass& c, Budget& budget = Budget::unlimited());

// Does phi |= phi2 (both modal) have an interpolant over sig(phi) & sig(phi2) on trees of
// outdegree <= d (d = -1: all models)?
Verdict decide_interpolant_existence(const Formula& phi, const Formula& phi2, int d,
                                     Budget& budget = Budget::unlimited());

// Separability over all models of formulas with graded modalities, by a graded modal formula
// (graded_separator) or a plain one.
Verdict decide_graded_separability(const Formula& phi, const Formula& phi2, bool graded_separator,
                                   Budget& budget = Budget::unlimited());

struct GradedDefinability {
  Verdict mu;                 // equivalent to a formula without grades
  std::optional<Verdict> ml;  // equivalent to a plain modal formula (only when mu holds)
};
GradedDefinability decide_mu_definability_graded(const Formula& phi, Budget& budget = Budget::unlimited());

// Both formulas conjoined with mu X.[]X and normalized.
std::pair<Formula, Formula> reduce_finite_trees(const Formula& phi, const Formula& phi2);

// Separability by a modal formula over sig(phi) & sig(phi2); all, words and binary classes only.
Verdict decide_craig_separability(const Formula& phi, const Formula& phi2, const ModelClass& c,
                                  Budget& budget = Budget::unlimited());

// Joint (sigma,n)-consistency for every n over words, by the product of the two prefix automata:
// a reachable cycle or common accepted word means yes. Returns the first failing n otherwise.
struct WordConsistency {
  bool all_n = false;
  int first_failure = -1;
};
WordConsistency word_consistency(const Npta& a, const Npta& a2, const Signature& sigma);

}  // namespace modsep
