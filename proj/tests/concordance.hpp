#pragma once

// Compares separability verdicts with exhaustive joint-consistency searches.

#include <algorithm>
#include <string>

#include "modsep/decide.hpp"
#include "modsep/kripke.hpp"
#include "modsep/oracle.hpp"

namespace modsep::testing {

struct Concordance {
  bool checked = false;  // false when the oracle ran out of budget
  bool agrees = true;
  std::string detail;
};

// Outdegree the oracle searches for a class. Over all models, small formulas need no more children
// than their diamonds ask for.
inline int oracle_degree(const Formula& phi, const Formula& phi2, const ModelClass& c) {
  if (c.degree() >= 0) return c.degree();
  return std::clamp(witness_degree(phi) + witness_degree(phi2), 2, 3);
}

// A separator of depth n exists iff no models are jointly (sigma,n)-bisimilar, and that property is
// monotone in n. A SEPARABLE verdict found at depth f is checked at f-1 (consistent) and f (not); a
// NOT_SEPARABLE verdict is checked at min(m, max_n).
inline Concordance check_concordance(const Formula& phi, const Formula& phi2, const ModelClass& c,
                                     const Signature& sigma, const Verdict& v, int max_n = 3,
                                     std::uint64_t budget = 1'000'000) {
  Concordance out;
  Formula f = normalize(phi), f2 = normalize(phi2);
  ModelClass base = c;
  if (c.finite_only()) {
    std::tie(f, f2) = reduce_finite_trees(f, f2);
    base = c.inner();
  }
  const int d = oracle_degree(f, f2, base);
  auto probe = [&](int n) { return joint_consistency_bruteforce(f, f2, sigma, n, d, budget).outcome; };
  auto fail = [&](const std::string& why) {
    out.agrees = false;
    out.detail = why + " for " + to_string(phi) + " / " + to_string(phi2) + " over " + c.to_string();
  };
  if (v.decision) {
    const int depth = std::max(v.trace.depth_bound, 0);
    SearchOutcome at = probe(depth);
    if (at == SearchOutcome::BudgetHit) return out;
    if (at != SearchOutcome::ExhaustedNone) fail("joint models at the separator depth " + std::to_string(depth));
    if (out.agrees && depth > 0) {
      SearchOutcome below = probe(depth - 1);
      if (below == SearchOutcome::BudgetHit) return out;
      if (below != SearchOutcome::Found) fail("no joint models below depth " + std::to_string(depth));
    }
  } else {
    const int n = std::min(std::max(v.trace.bound, 0), max_n);
    SearchOutcome at = probe(n);
    if (at == SearchOutcome::BudgetHit) return out;
    if (at != SearchOutcome::Found) fail("no joint models at depth " + std::to_string(n));
  }
  out.checked = true;
  return out;
}

}  // namespace modsep::testing
