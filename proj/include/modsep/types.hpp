#pragma once

#include <map>
#include <string>

#include "modsep/budget.hpp"
#include "modsep/formula.hpp"
#include "modsep/kripke.hpp"

namespace modsep {

// The (sigma,n)-bisimulation types realized by models of a modal formula of depth <= n, each with
// one witness model. Models range over trees of outdegree <= d (any outdegree when d < 0) and
// height <= n, which loses nothing since both truth and the type only see the n-prefix.
// Keys are canonical strings, so two calls with the same sigma and n produce comparable keys.
std::map<std::string, KripkeTree> realized_types(const Formula& phi, const Signature& sigma, int n, int d,
                                                 Budget& budget = Budget::unlimited());

}  // namespace modsep
