#pragma once

#include <string>
#include <vector>

#include "modsep/formula.hpp"
#include "modsep/kripke.hpp"

namespace modsep {

enum class Player { Eve, Adam };

// Finite parity game, max-parity convention: Eve wins an infinite play iff the largest
// priority seen infinitely often is even. A position without moves is lost by its owner.
struct ParityGame {
  std::vector<Player> owner;
  std::vector<int> priority;
  std::vector<std::vector<int>> moves;
  std::vector<std::string> label;
  int initial = 0;

  int add_position(Player p, int prio, std::string lbl = {});
  void add_move(int from, int to) { moves[from].push_back(to); }
  std::size_t size() const { return owner.size(); }
};

struct ParitySolution {
  std::vector<char> eve_wins;      // per position
  std::vector<int> eve_strategy;   // chosen successor on Eve positions she wins, else -1
  std::vector<int> adam_strategy;  // chosen successor on Adam positions he wins, else -1
};

// Recursive (Zielonka) solver with positional strategies. Deterministic.
ParitySolution solve_parity(const ParityGame& g);

// Finite Kripke structure with arbitrary edges (used for lasso-shaped test models).
struct KripkeGraph {
  std::vector<std::vector<std::string>> valuation;
  std::vector<std::vector<int>> successors;
  int root = 0;
};
KripkeGraph as_graph(const KripkeTree& m);

// Semantic game for a normalized formula; position labels are "world:subformula".
ParityGame semantic_game(const KripkeTree& m, const Formula& phi);
ParityGame semantic_game(const KripkeGraph& m, const Formula& phi);

bool model_check(const KripkeTree& m, const Formula& phi);
bool model_check(const KripkeGraph& m, const Formula& phi);

}  // namespace modsep
