#include "modsep/games.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <stdexcept>

#include "modsep/formula_graph.hpp"

namespace modsep {

// ---------------------------------------------------------------------------
// Formula graph

namespace {

struct GraphBuilder {
  FormulaGraph& g;
  std::vector<std::pair<std::string, int>> scope;
  std::vector<int> binder_depth;  // per entry, for binders

  int add(const Formula& f, int depth) {
    int id = static_cast<int>(g.entries.size());
    g.entries.push_back({});
    g.formulas.push_back(f);
    binder_depth.push_back(-1);
    auto& e = g.entries[id];
    e.kind = f.kind();
    e.name = f.name();
    e.negated = f.negated();
    e.grade = f.grade();
    switch (f.kind()) {
      case Kind::Not:
        throw std::invalid_argument("formula is not in negation normal form");
      case Kind::Var: {
        int target = -1;
        for (auto it = scope.rbegin(); it != scope.rend(); ++it)
          if (it->first == f.name()) {
            target = it->second;
            break;
          }
        if (target < 0) throw std::invalid_argument("unbound variable " + f.name());
        g.entries[id].binder = target;
        break;
      }
      case Kind::Mu:
      case Kind::Nu: {
        binder_depth[id] = depth;
        scope.emplace_back(f.name(), id);
        int b = add(f.body(), depth + 1);
        scope.pop_back();
        g.entries[id].args.push_back(b);
        break;
      }
      default:
        for (const auto& a : f.args()) {
          int c = add(a, depth);
          g.entries[id].args.push_back(c);
        }
    }
    return id;
  }
};

}  // namespace

FormulaGraph FormulaGraph::build(const Formula& normalized) {
  FormulaGraph g;
  GraphBuilder b{g, {}, {}};
  b.add(normalized, 0);
  int max_depth = 0;
  for (int d : b.binder_depth) max_depth = std::max(max_depth, d);
  std::vector<int> binder_prio(g.entries.size(), 0);
  for (std::size_t i = 0; i < g.entries.size(); ++i) {
    if (b.binder_depth[i] < 0) continue;
    binder_prio[i] = 2 * (max_depth - b.binder_depth[i]) + (g.entries[i].kind == Kind::Mu ? 1 : 0);
  }
  for (auto& e : g.entries) {
    if (e.kind == Kind::Var) {
      e.priority = binder_prio[e.binder];
      g.max_priority = std::max(g.max_priority, e.priority);
    }
  }
  g.root = 0;
  return g;
}

std::vector<int> FormulaGraph::local_successors(int i) const {
  const auto& e = entries[i];
  switch (e.kind) {
    case Kind::And:
    case Kind::Or:
    case Kind::Mu:
    case Kind::Nu:
      return e.args;
    case Kind::Var:
      return {e.binder};
    default:
      return {};
  }
}

// ---------------------------------------------------------------------------
// Parity game

int ParityGame::add_position(Player p, int prio, std::string lbl) {
  owner.push_back(p);
  priority.push_back(prio);
  moves.emplace_back();
  label.push_back(std::move(lbl));
  return static_cast<int>(owner.size()) - 1;
}

namespace {

class Zielonka {
 public:
  explicit Zielonka(const ParityGame& g) {
    n_ = static_cast<int>(g.size());
    owner_.resize(n_ + 2);
    prio_.resize(n_ + 2);
    succ_.resize(n_ + 2);
    for (int v = 0; v < n_; ++v) {
      owner_[v] = g.owner[v] == Player::Eve ? 0 : 1;
      prio_[v] = g.priority[v];
      succ_[v] = g.moves[v];
    }
    eve_sink_ = n_;
    adam_sink_ = n_ + 1;
    owner_[eve_sink_] = 0;
    prio_[eve_sink_] = 0;
    succ_[eve_sink_] = {eve_sink_};
    owner_[adam_sink_] = 1;
    prio_[adam_sink_] = 1;
    succ_[adam_sink_] = {adam_sink_};
    for (int v = 0; v < n_; ++v)
      if (succ_[v].empty()) succ_[v] = {owner_[v] == 0 ? adam_sink_ : eve_sink_};
    total_ = n_ + 2;
    pred_.resize(total_);
    for (int v = 0; v < total_; ++v)
      for (int w : succ_[v]) pred_[w].push_back(v);
    strat_.assign(total_, -1);
    win_.assign(total_, -1);
  }

  ParitySolution run() {
    std::vector<int> all(total_);
    for (int v = 0; v < total_; ++v) all[v] = v;
    std::vector<char> mask(total_, 1);
    auto w = solve(all, mask);
    for (int v : w[0]) win_[v] = 0;
    for (int v : w[1]) win_[v] = 1;
    ParitySolution s;
    s.eve_wins.assign(n_, 0);
    s.eve_strategy.assign(n_, -1);
    s.adam_strategy.assign(n_, -1);
    for (int v = 0; v < n_; ++v) {
      s.eve_wins[v] = win_[v] == 0;
      int m = strat_[v] >= n_ ? -1 : strat_[v];
      if (owner_[v] == 0 && win_[v] == 0) s.eve_strategy[v] = m;
      if (owner_[v] == 1 && win_[v] == 1) s.adam_strategy[v] = m;
    }
    return s;
  }

 private:
  using Region = std::vector<int>;

  // Attractor of `target` for player j inside the subgame `mask`.
  Region attractor(const Region& nodes, const std::vector<char>& mask, const Region& target, int j) {
    std::vector<char> in(total_, 0);
    std::vector<int> count(total_, 0);
    for (int v : nodes) {
      int c = 0;
      for (int w : succ_[v])
        if (mask[w]) ++c;
      count[v] = c;
    }
    std::deque<int> queue;
    Region out;
    for (int v : target) {
      in[v] = 1;
      queue.push_back(v);
      out.push_back(v);
    }
    while (!queue.empty()) {
      int x = queue.front();
      queue.pop_front();
      for (int u : pred_[x]) {
        if (!mask[u] || in[u]) continue;
        if (owner_[u] == j) {
          in[u] = 1;
          strat_[u] = x;
          queue.push_back(u);
          out.push_back(u);
        } else if (--count[u] == 0) {
          in[u] = 1;
          queue.push_back(u);
          out.push_back(u);
        }
      }
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  static Region minus(const Region& a, const Region& b) {
    Region out;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
  }

  std::array<Region, 2> solve(const Region& nodes, std::vector<char>& mask) {
    std::array<Region, 2> w;
    if (nodes.empty()) return w;
    int p = -1;
    for (int v : nodes) p = std::max(p, prio_[v]);
    int i = p % 2;
    Region top;
    for (int v : nodes)
      if (prio_[v] == p) top.push_back(v);
    for (int v : top) {
      if (owner_[v] != i) continue;
      for (int s : succ_[v])
        if (mask[s]) {
          strat_[v] = s;
          break;
        }
    }
    Region a = attractor(nodes, mask, top, i);
    Region rest = minus(nodes, a);
    for (int v : a) mask[v] = 0;
    auto sub = solve(rest, mask);
    for (int v : a) mask[v] = 1;
    if (sub[1 - i].empty()) {
      w[i] = nodes;
      return w;
    }
    Region b = attractor(nodes, mask, sub[1 - i], 1 - i);
    Region rest2 = minus(nodes, b);
    for (int v : b) mask[v] = 0;
    auto sub2 = solve(rest2, mask);
    for (int v : b) mask[v] = 1;
    w[i] = sub2[i];
    Region lose = sub2[1 - i];
    lose.insert(lose.end(), b.begin(), b.end());
    std::sort(lose.begin(), lose.end());
    w[1 - i] = std::move(lose);
    return w;
  }

  int n_ = 0, total_ = 0, eve_sink_ = 0, adam_sink_ = 0;
  std::vector<int> owner_, prio_, strat_, win_;
  std::vector<std::vector<int>> succ_, pred_;
};

}  // namespace

ParitySolution solve_parity(const ParityGame& g) { return Zielonka(g).run(); }

// ---------------------------------------------------------------------------
// Semantic games

KripkeGraph as_graph(const KripkeTree& m) {
  KripkeGraph g;
  g.root = m.root();
  for (int v = 0; v < static_cast<int>(m.size()); ++v) {
    g.valuation.push_back(m.valuation(v));
    g.successors.push_back(m.children(v));
  }
  return g;
}

namespace {

void subsets_of_size(int n, int k, const std::function<void(const std::vector<int>&)>& f) {
  std::vector<int> idx(k);
  for (int i = 0; i < k; ++i) idx[i] = i;
  if (k > n) return;
  for (;;) {
    f(idx);
    int pos = k - 1;
    while (pos >= 0 && idx[pos] == n - k + pos) --pos;
    if (pos < 0) return;
    ++idx[pos];
    for (int q = pos + 1; q < k; ++q) idx[q] = idx[q - 1] + 1;
  }
}

}  // namespace

ParityGame semantic_game(const KripkeGraph& m, const Formula& phi) {
  FormulaGraph fg = FormulaGraph::build(phi);
  ParityGame g;
  std::map<std::pair<int, int>, int> index;
  std::deque<std::pair<int, int>> work;
  auto holds = [&](int w, const std::string& p) {
    const auto& val = m.valuation[w];
    return std::find(val.begin(), val.end(), p) != val.end();
  };
  auto owner_of = [&](int w, int e) {
    const auto& en = fg[e];
    switch (en.kind) {
      case Kind::False:
      case Kind::Or:
      case Kind::Dia:
        return Player::Eve;
      case Kind::Box:
        return en.grade > 0 && !m.successors[w].empty() ? Player::Eve : Player::Adam;
      case Kind::Prop:
        return holds(w, en.name) != en.negated ? Player::Adam : Player::Eve;
      default:
        return Player::Adam;
    }
  };
  auto position = [&](int w, int e) {
    auto key = std::make_pair(w, e);
    auto it = index.find(key);
    if (it != index.end()) return it->second;
    int id = g.add_position(owner_of(w, e), fg[e].priority, std::to_string(w) + ":" + std::to_string(e));
    index.emplace(key, id);
    work.push_back(key);
    return id;
  };
  g.initial = position(m.root, fg.root);
  while (!work.empty()) {
    auto [w, e] = work.front();
    work.pop_front();
    int pos = index.at({w, e});
    const auto& en = fg[e];
    const auto& kids = m.successors[w];
    switch (en.kind) {
      case Kind::And:
      case Kind::Or:
      case Kind::Mu:
      case Kind::Nu:
      case Kind::Var:
        for (int s : fg.local_successors(e)) g.add_move(pos, position(w, s));
        break;
      case Kind::Dia: {
        int body = en.args[0];
        if (en.grade == 1) {
          for (int c : kids) g.add_move(pos, position(c, body));
          break;
        }
        subsets_of_size(static_cast<int>(kids.size()), en.grade, [&](const std::vector<int>& pick) {
          std::string lbl = std::to_string(w) + ":pick";
          int aux = g.add_position(Player::Adam, 0, lbl);
          g.add_move(pos, aux);
          for (int i : pick) g.add_move(aux, position(kids[i], body));
        });
        break;
      }
      case Kind::Box: {
        int body = en.args[0];
        if (en.grade == 0 || kids.empty()) {
          for (int c : kids) g.add_move(pos, position(c, body));
          break;
        }
        int k = std::min<int>(en.grade, static_cast<int>(kids.size()));
        subsets_of_size(static_cast<int>(kids.size()), k, [&](const std::vector<int>& except) {
          int aux = g.add_position(Player::Adam, 0, std::to_string(w) + ":except");
          g.add_move(pos, aux);
          for (int i = 0; i < static_cast<int>(kids.size()); ++i)
            if (!std::binary_search(except.begin(), except.end(), i)) g.add_move(aux, position(kids[i], body));
        });
        break;
      }
      default:
        break;  // literals and constants end the play
    }
  }
  return g;
}

ParityGame semantic_game(const KripkeTree& m, const Formula& phi) { return semantic_game(as_graph(m), phi); }

bool model_check(const KripkeGraph& m, const Formula& phi) {
  Formula f = is_normalized(phi) ? phi : normalize(phi);
  ParityGame g = semantic_game(m, f);
  return solve_parity(g).eve_wins[g.initial] != 0;
}

bool model_check(const KripkeTree& m, const Formula& phi) { return model_check(as_graph(m), phi); }

}  // namespace modsep
