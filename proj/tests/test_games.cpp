#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <functional>

#include "modsep/games.hpp"
#include "modsep/oracle.hpp"
#include "support.hpp"

using namespace modsep;
using namespace modsep::testing;

namespace {

ParityGame random_game(Rng& rng, int size) {
  ParityGame g;
  for (int i = 0; i < size; ++i) g.add_position(coin(rng) ? Player::Eve : Player::Adam, pick(rng, 0, 3));
  for (int i = 0; i < size; ++i) {
    int k = pick(rng, 0, 2);
    for (int j = 0; j < k; ++j) g.add_move(i, pick(rng, 0, size - 1));
  }
  return g;
}

// With Eve's positional choice fixed, can Adam force a win from v? Adam wins by reaching an Eve
// dead end or a cycle whose largest priority is odd.
bool adam_wins_against(const ParityGame& g, const std::vector<int>& choice, int start) {
  const int n = static_cast<int>(g.size());
  auto succ = [&](int v) {
    if (g.owner[v] == Player::Eve) return choice[v] < 0 ? std::vector<int>{} : std::vector<int>{choice[v]};
    return g.moves[v];
  };
  std::vector<char> reach(n, 0);
  std::function<void(int)> mark = [&](int v) {
    if (reach[v]) return;
    reach[v] = 1;
    for (int w : succ(v)) mark(w);
  };
  mark(start);
  for (int v = 0; v < n; ++v)
    if (reach[v] && g.owner[v] == Player::Eve && g.moves[v].empty()) return true;
  for (int v = 0; v < n; ++v) {
    if (!reach[v] || g.priority[v] % 2 == 0) continue;
    // cycle through v using only priorities <= priority[v]
    std::vector<char> seen(n, 0);
    std::function<bool(int)> back = [&](int u) {
      for (int w : succ(u)) {
        if (g.priority[w] > g.priority[v]) continue;
        if (w == v) return true;
        if (!seen[w]) {
          seen[w] = 1;
          if (back(w)) return true;
        }
      }
      return false;
    };
    if (back(v)) return true;
  }
  return false;
}

bool eve_wins_bruteforce(const ParityGame& g, int start) {
  const int n = static_cast<int>(g.size());
  std::vector<int> choice(n, -1), index(n, 0);
  // enumerate positional Eve strategies
  std::function<bool(int)> rec = [&](int v) -> bool {
    if (v == n) return !adam_wins_against(g, choice, start);
    if (g.owner[v] != Player::Eve || g.moves[v].empty()) return rec(v + 1);
    for (int w : g.moves[v]) {
      choice[v] = w;
      if (rec(v + 1)) return true;
    }
    choice[v] = -1;
    return false;
  };
  return rec(0);
}

}  // namespace

TEST_CASE("parity solver agrees with strategy enumeration") {
  Rng rng(21);
  for (int i = 0; i < 400; ++i) {
    ParityGame g = random_game(rng, pick(rng, 1, 7));
    ParitySolution s = solve_parity(g);
    for (int v = 0; v < static_cast<int>(g.size()); ++v) {
      REQUIRE(static_cast<bool>(s.eve_wins[v]) == eve_wins_bruteforce(g, v));
      if (s.eve_wins[v] && g.owner[v] == Player::Eve) CHECK(s.eve_strategy[v] >= 0);
    }
    // Eve's strategy wins everywhere in her region.
    std::vector<int> choice(g.size(), -1);
    for (std::size_t v = 0; v < g.size(); ++v)
      if (g.owner[v] == Player::Eve) choice[v] = s.eve_strategy[v] >= 0 ? s.eve_strategy[v] : (g.moves[v].empty() ? -1 : g.moves[v][0]);
    for (int v = 0; v < static_cast<int>(g.size()); ++v)
      if (s.eve_wins[v]) CHECK_FALSE(adam_wins_against(g, choice, v));
  }
}

TEST_CASE("dead ends lose for their owner") {
  ParityGame g;
  int e = g.add_position(Player::Eve, 0);
  int a = g.add_position(Player::Adam, 1);
  auto s = solve_parity(g);
  CHECK_FALSE(s.eve_wins[e]);
  CHECK(s.eve_wins[a]);
}

TEST_CASE("model checking agrees with fixpoint evaluation") {
  Rng rng(23);
  FormulaShape shape;
  shape.fixpoints = true;
  shape.depth = 4;
  for (int i = 0; i < 400; ++i) {
    Formula f = normalize(random_formula(rng, shape));
    KripkeTree t = random_tree(rng, shape.sigma, 2, pick(rng, 0, 3));
    CHECK(model_check(t, f) == fixpoint_eval(t, f));
  }
}

TEST_CASE("graded model checking") {
  KripkeTree t = parse_tree("(node {} (node {a}) (node {a}) (node {}))");
  CHECK(model_check(t, normalize(parse_formula("<2>a"))));
  CHECK_FALSE(model_check(t, normalize(parse_formula("<3>a"))));
  CHECK(model_check(t, normalize(parse_formula("[1]a"))));
  CHECK_FALSE(model_check(t, normalize(parse_formula("[0]a"))));
}

TEST_CASE("fixpoints on lassos") {
  KripkeGraph loop;
  loop.valuation = {{}};
  loop.successors = {{0}};
  CHECK(model_check(loop, normalize(theta_inf())));
  CHECK_FALSE(model_check(loop, normalize(parse_formula("mu X. []X"))));
  KripkeTree path = parse_tree("(node {} (node {} (node {})))");
  CHECK_FALSE(model_check(path, normalize(theta_inf())));
  CHECK(model_check(path, normalize(parse_formula("mu X. []X"))));
  ParityGame g = semantic_game(path, normalize(parse_formula("<>a")));
  CHECK(g.size() > 0);
  CHECK(g.label[g.initial].rfind("0:", 0) == 0);
}
