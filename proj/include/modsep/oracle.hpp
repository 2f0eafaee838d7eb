#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "modsep/automata.hpp"
#include "modsep/formula.hpp"
#include "modsep/kripke.hpp"

namespace modsep {

// Reference implementations by exhaustive enumeration. Nothing here calls the decision procedures.

enum class SearchOutcome { Found, ExhaustedNone, BudgetHit };
std::string to_string(SearchOutcome o);

enum class Linkage { Bisimilar, Isomorphic };

struct JointSearch {
  SearchOutcome outcome = SearchOutcome::ExhaustedNone;
  // Witness n-prefixes. For a modal formula of depth <= n the tree is itself a model; for other
  // formulas it is only known to extend to one (checked through the formula's automaton).
  std::optional<std::pair<KripkeTree, KripkeTree>> witness;
  std::uint64_t work = 0;
};

// Search for M |= phi, M' |= phi2 in T^d whose n-prefixes are (sigma,n)-linked.
JointSearch joint_consistency_bruteforce(const Formula& phi, const Formula& phi2, const Signature& sigma, int n, int d,
                                         std::uint64_t budget, Linkage link = Linkage::Bisimilar);
// Same for automata languages (arity taken from the automata).
JointSearch joint_consistency_bruteforce(const Npta& a, const Npta& a2, const Signature& sigma, int n,
                                         std::uint64_t budget, Linkage link = Linkage::Isomorphic);

// Visits every witness pair (one per pair of distinct prefix types); stop by returning false.
SearchOutcome for_each_joint_witness(const Formula& phi, const Formula& phi2, const Signature& sigma, int n, int d,
                                     std::uint64_t budget,
                                     const std::function<bool(const KripkeTree&, const KripkeTree&)>& visit);

// Knaster-Tarski evaluation on a finite tree (grades respected). Independent of the game solver.
bool fixpoint_eval(const KripkeTree& m, const Formula& phi);

// A tree of outdegree <= d and height <= depth on which the two formulas differ.
std::optional<KripkeTree> equivalence_bruteforce(const Formula& phi, const Formula& psi, int d, int depth);

// Does some finite tree accepted by a map onto t by a functional bisimulation? Preimages are
// searched among trees of outdegree <= d.
bool bisim_quotient_member_bruteforce(const Npta& a, const KripkeTree& t, int d);

}  // namespace modsep
