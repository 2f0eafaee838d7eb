#pragma once

#include <optional>

#include "modsep/automata.hpp"
#include "modsep/budget.hpp"
#include "modsep/formula.hpp"
#include "modsep/model_class.hpp"

namespace modsep {

// Automaton for phi over the class: the class's outdegree (graded formulas over all models use
// witness_degree), conjoined with mu X.[]X for finite trees.
Npta class_automaton(const Formula& phi, const ModelClass& c, Budget& budget = Budget::unlimited());
bool satisfiable(const Formula& phi, const ModelClass& c, Budget& budget = Budget::unlimited());
// phi |= psi over the class.
bool entails(const Formula& phi, const Formula& psi, const ModelClass& c, Budget& budget = Budget::unlimited());

// Depth-n formula over sigma true in a word iff the word shares its n-prefix (sigma-reduct) with a
// word accepted by a. Needs arity 1.
Formula uniform_consequence_words(const Npta& a, int n, const Signature& sigma);
Formula uniform_consequence_words(const Npta& a, int n);

// Depth-n uniform consequence over all models (set mode, or tuples read as sets) or over binary
// trees (duplication-safe tuple automaton of arity 2).
Formula uniform_consequence(const Npta& a, int n, const ModelClass& c, const Signature& sigma);
Formula uniform_consequence(const Npta& a, int n, const ModelClass& c);

struct SeparatorCheck {
  bool left_ok = false;   // phi |= psi
  bool right_ok = false;  // psi |= not phi2
  // Prefix of a model of phi & ~psi (or of psi & phi2) when a check fails.
  std::optional<KripkeTree> countermodel;
  bool holds() const { return left_ok && right_ok; }
};
SeparatorCheck verify_separator(const Formula& phi, const Formula& phi2, const Formula& psi, const ModelClass& c,
                                Budget& budget = Budget::unlimited());

// Disjunction of the characteristic formulas of the bisimulation-reduced sigma-trees of outdegree
// <= d and depth <= n that are quotients of n-prefixes of models of phi. nullopt when that
// disjunction does not separate phi from phi2 over T^d (n too small, or the pair inseparable).
std::optional<Formula> separator_td(const Formula& phi, const Formula& phi2, int d, const Signature& sigma, int n,
                                    Budget& budget = Budget::unlimited());

// Interpolant for modal theta |= not theta2 over trees of outdegree <= d (d < 0: all models) built
// from the sigma-types of theta's models. Throws std::domain_error when some type is shared.
Formula ml_craig_interpolant(const Formula& theta, const Formula& theta2, const Signature& sigma, int d = -1,
                             Budget& budget = Budget::unlimited());

}  // namespace modsep
