#pragma once

#include <string>
#include <vector>

#include "modsep/formula.hpp"

namespace modsep {

// Subformula occurrences of a normalized formula, indexed; variables point at their binders.
// Priorities follow the binder nesting: nu even, mu odd, outer binders higher. Only variable
// occurrences (regeneration points) carry a binder priority; everything else has 0.
struct FormulaGraph {
  struct Entry {
    Kind kind = Kind::True;
    std::string name;
    bool negated = false;
    int grade = 0;
    std::vector<int> args;
    int binder = -1;  // for variables
    int priority = 0;
  };

  std::vector<Entry> entries;
  std::vector<Formula> formulas;  // formula of each entry
  int root = 0;
  int max_priority = 0;

  static FormulaGraph build(const Formula& normalized);

  std::size_t size() const { return entries.size(); }
  const Entry& operator[](int i) const { return entries[i]; }
  // Successors inside one world: operands, binder body, or the binder of a variable.
  std::vector<int> local_successors(int i) const;
};

}  // namespace modsep
