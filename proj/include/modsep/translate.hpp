#pragma once

#include <stdexcept>

#include "modsep/automata.hpp"
#include "modsep/budget.hpp"
#include "modsep/formula.hpp"

namespace modsep {

class UnsupportedFormula : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr int kUnbounded = -1;

// Nondeterministic automaton equivalent to phi over T^d (tuple mode), or over all trees when
// d == kUnbounded (set mode). Handles formulas whose fixpoint cycles are all of one kind
// (no mu/nu alternation inside a strongly connected part of the formula graph); others raise
// UnsupportedFormula. Graded formulas need a finite d. The alphabet defaults to sig(phi).
Npta muml_to_npta(const Formula& phi, int d, Budget& budget = Budget::unlimited());
Npta muml_to_npta(const Formula& phi, int d, const Signature& alphabet, Budget& budget = Budget::unlimited());

// True when muml_to_npta accepts the formula.
bool translatable(const Formula& phi);

}  // namespace modsep
