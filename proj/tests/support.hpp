#pragma once

// Hand-rolled generators shared by the property tests.

#include <random>
#include <string>
#include <vector>

#include "modsep/automata.hpp"
#include "modsep/formula.hpp"
#include "modsep/kripke.hpp"

namespace modsep::testing {

using Rng = std::mt19937_64;

inline int pick(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }
inline bool coin(Rng& rng, double p = 0.5) { return std::bernoulli_distribution(p)(rng); }

struct FormulaShape {
  Signature sigma{"a", "b"};
  int depth = 3;
  bool fixpoints = false;
  int max_grade = 1;  // > 1 allows graded modalities
};

namespace detail {

inline Formula random_formula(Rng& rng, const FormulaShape& shape, int depth, std::vector<std::string>& vars,
                              int& fresh) {
  if (depth == 0 || coin(rng, 0.2)) {
    if (coin(rng, 0.1)) return coin(rng) ? Formula::top() : Formula::bottom();
    if (shape.sigma.empty()) return coin(rng) ? Formula::top() : Formula::bottom();
    return Formula::prop(shape.sigma[pick(rng, 0, static_cast<int>(shape.sigma.size()) - 1)], coin(rng, 0.3));
  }
  int r = pick(rng, 0, shape.fixpoints ? 7 : 5);
  auto sub = [&] { return random_formula(rng, shape, depth - 1, vars, fresh); };
  // Variables only appear right under a modality.
  auto modal_body = [&] {
    if (!vars.empty() && coin(rng, 0.3)) return Formula::var(vars[pick(rng, 0, static_cast<int>(vars.size()) - 1)]);
    return sub();
  };
  switch (r) {
    case 0:
      return Formula::conj(sub(), sub());
    case 1:
      return Formula::disj(sub(), sub());
    case 2: {
      // No variable may end up under a negation.
      std::vector<std::string> none;
      return Formula::neg(random_formula(rng, shape, depth - 1, none, fresh));
    }
    case 3:
      return Formula::dia(modal_body(), shape.max_grade > 1 ? pick(rng, 1, shape.max_grade) : 1);
    case 4:
      return Formula::box(modal_body(), shape.max_grade > 1 ? pick(rng, 0, shape.max_grade - 1) : 0);
    case 5:
      return Formula::conj(sub(), Formula::dia(modal_body()));
    default: {
      // Inner binders do not see outer variables, so fixpoint kinds never alternate.
      std::string x = "X" + std::to_string(fresh++);
      std::vector<std::string> inner{x};
      Formula guarded = coin(rng) ? Formula::dia(Formula::var(x)) : Formula::box(Formula::var(x));
      Formula body = coin(rng) ? Formula::disj(random_formula(rng, shape, depth - 1, inner, fresh), guarded)
                               : Formula::conj(random_formula(rng, shape, depth - 1, inner, fresh), guarded);
      return r == 6 ? Formula::mu(x, body) : Formula::nu(x, body);
    }
  }
}

}  // namespace detail

// Closed formula; fixpoint bodies only mention their own variable positively, so no alternation.
inline Formula random_formula(Rng& rng, const FormulaShape& shape) {
  std::vector<std::string> vars;
  int fresh = 0;
  return detail::random_formula(rng, shape, shape.depth, vars, fresh);
}

inline KripkeTree random_tree(Rng& rng, const Signature& sigma, int d, int depth) {
  auto valuation = [&] {
    std::vector<std::string> v;
    for (const auto& p : sigma)
      if (coin(rng)) v.push_back(p);
    return v;
  };
  KripkeTree t = KripkeTree::leaf(valuation());
  std::vector<int> frontier{0};
  for (int level = 0; level < depth; ++level) {
    std::vector<int> next;
    for (int v : frontier) {
      int k = pick(rng, 0, d);
      for (int i = 0; i < k; ++i) next.push_back(t.add_child(v, valuation()));
    }
    frontier = std::move(next);
  }
  return t;
}

// Random tuple-mode automaton with arity d; priorities in {0,1,2} or a safety automaton.
inline Npta random_npta(Rng& rng, const Signature& sigma, int states, int d, double density = 0.35) {
  Npta a(sigma, TransitionMode::Tuple, d);
  bool safety = coin(rng, 0.3);
  for (int q = 0; q < states; ++q) a.add_state("q" + std::to_string(q), safety ? 0 : pick(rng, 1, 2));
  a.set_initial(0);
  const Letter letters = static_cast<Letter>(a.letter_count());
  for (int q = 0; q < states; ++q)
    for (Letter c = 0; c < letters; ++c)
      for (int k = 0; k <= d; ++k) {
        if (!coin(rng, density)) continue;
        StateTuple t;
        for (int i = 0; i < k; ++i) t.push_back(pick(rng, 0, states - 1));
        a.add_transition(q, c, t);
      }
  return a;
}

}  // namespace modsep::testing
