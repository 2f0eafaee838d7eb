#include "modsep/automata.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

#include "modsep/games.hpp"
#include "modsep/matching.hpp"

namespace modsep {

// ---------------------------------------------------------------------------
// Npta

Npta::Npta(Signature sigma, TransitionMode mode, int arity)
    : sigma_(std::move(sigma)), mode_(mode), arity_(mode == TransitionMode::Set ? -1 : arity) {
  if (sigma_.size() > 20) throw std::invalid_argument("signature too large for an explicit alphabet");
  if (mode == TransitionMode::Tuple && arity < 0) throw std::invalid_argument("tuple mode needs an arity");
}

int Npta::add_state(std::string name, int priority) {
  names_.push_back(std::move(name));
  priority_.push_back(priority);
  delta_.emplace_back(letter_count());
  return static_cast<int>(priority_.size()) - 1;
}

void Npta::add_transition(int q, Letter c, StateTuple t) {
  if (q < 0 || q >= static_cast<int>(size())) throw std::out_of_range("transition from unknown state");
  if (c >= letter_count()) throw std::out_of_range("letter outside the alphabet");
  for (int p : t)
    if (p < 0 || p >= static_cast<int>(size())) throw std::out_of_range("transition to unknown state");
  std::sort(t.begin(), t.end());
  if (mode_ == TransitionMode::Set) t.erase(std::unique(t.begin(), t.end()), t.end());
  else if (static_cast<int>(t.size()) > arity_) throw std::invalid_argument("tuple longer than the arity");
  auto& list = delta_[q][c];
  auto it = std::lower_bound(list.begin(), list.end(), t);
  if (it == list.end() || *it != t) list.insert(it, std::move(t));
}

std::size_t Npta::transition_count() const {
  std::size_t n = 0;
  for (const auto& per_state : delta_)
    for (const auto& per_letter : per_state) n += per_letter.size();
  return n;
}

Npta Npta::with_initial(int q) const {
  Npta copy = *this;
  copy.initial_ = q;
  return copy;
}

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  std::size_t e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  std::string w;
  while (in >> w) out.push_back(w);
  return out;
}

// Contents between a pair of brackets, e.g. "{a b}" -> "a b".
std::string bracketed(const std::string& s, char open, char close, int line) {
  std::string t = trim(s);
  if (t.size() < 2 || t.front() != open || t.back() != close)
    throw std::invalid_argument("line " + std::to_string(line) + ": expected " + open + "..." + close);
  return t.substr(1, t.size() - 2);
}

}  // namespace

Npta parse_npta(const std::string& text) {
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  std::optional<Signature> sigma;
  std::optional<int> arity;
  bool set_mode = false;
  std::vector<std::string> state_names;
  std::string initial;
  std::map<std::string, int> prio;
  struct PendingTransition {
    std::string from;
    std::vector<std::string> valuation;
    std::vector<std::string> targets;
    int line;
  };
  std::vector<PendingTransition> pending;

  while (std::getline(in, raw)) {
    ++line;
    std::string s = raw.substr(0, raw.find('#'));
    s = trim(s);
    if (s.empty()) continue;
    auto arrow = s.find("->");
    if (arrow != std::string::npos) {
      std::string lhs = s.substr(0, arrow);
      std::string rhs = trim(s.substr(arrow + 2));
      auto comma = lhs.find(',');
      if (comma == std::string::npos) throw std::invalid_argument("line " + std::to_string(line) + ": expected 'q , {..}'");
      PendingTransition t;
      t.from = trim(lhs.substr(0, comma));
      t.valuation = words(bracketed(lhs.substr(comma + 1), '{', '}', line));
      if (!rhs.empty() && rhs.front() == '{') {
        if (!set_mode) throw std::invalid_argument("line " + std::to_string(line) + ": set transition in tuple mode");
        t.targets = words(bracketed(rhs, '{', '}', line));
      } else {
        if (set_mode) throw std::invalid_argument("line " + std::to_string(line) + ": tuple transition in set mode");
        t.targets = words(bracketed(rhs, '(', ')', line));
      }
      t.line = line;
      pending.push_back(std::move(t));
      continue;
    }
    auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("line " + std::to_string(line) + ": unrecognized line");
    std::string key = trim(s.substr(0, colon));
    std::string value = trim(s.substr(colon + 1));
    if (key == "sig") {
      sigma = Signature(words(value));
    } else if (key == "arity") {
      if (value == "unbounded") {
        set_mode = true;
        arity = -1;
      } else {
        try {
          arity = std::stoi(value);
        } catch (const std::exception&) {
          throw std::invalid_argument("line " + std::to_string(line) + ": bad arity");
        }
        if (*arity < 0) throw std::invalid_argument("line " + std::to_string(line) + ": bad arity");
      }
    } else if (key == "states") {
      state_names = words(value);
    } else if (key == "initial") {
      initial = value;
    } else if (key == "prio") {
      for (const auto& w : words(value)) {
        auto eq = w.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("line " + std::to_string(line) + ": expected q=p");
        try {
          prio[w.substr(0, eq)] = std::stoi(w.substr(eq + 1));
        } catch (const std::exception&) {
          throw std::invalid_argument("line " + std::to_string(line) + ": bad priority");
        }
      }
    } else {
      throw std::invalid_argument("line " + std::to_string(line) + ": unknown key '" + key + "'");
    }
  }
  if (!sigma) sigma = Signature();
  if (!arity) throw std::invalid_argument("missing 'arity:' line");
  if (state_names.empty()) throw std::invalid_argument("missing 'states:' line");

  Npta a(*sigma, set_mode ? TransitionMode::Set : TransitionMode::Tuple, *arity);
  std::map<std::string, int> id;
  for (const auto& n : state_names) {
    if (id.count(n)) throw std::invalid_argument("duplicate state " + n);
    id[n] = a.add_state(n, prio.count(n) ? prio[n] : 0);
  }
  for (const auto& [n, p] : prio)
    if (!id.count(n)) throw std::invalid_argument("priority for unknown state " + n);
  auto lookup = [&](const std::string& n, int ln) {
    auto it = id.find(n);
    if (it == id.end()) throw std::invalid_argument("line " + std::to_string(ln) + ": unknown state " + n);
    return it->second;
  };
  a.set_initial(initial.empty() ? 0 : lookup(initial, 0));
  for (const auto& t : pending) {
    for (const auto& p : t.valuation)
      if (!sigma->contains(p)) throw std::invalid_argument("line " + std::to_string(t.line) + ": proposition outside sig: " + p);
    StateTuple targets;
    for (const auto& n : t.targets) targets.push_back(lookup(n, t.line));
    a.add_transition(lookup(t.from, t.line), letter_of(t.valuation, *sigma), std::move(targets));
  }
  return a;
}

std::string to_string(const Npta& a) {
  std::ostringstream out;
  out << "sig:";
  for (const auto& p : a.sigma()) out << ' ' << p;
  out << "\narity: " << (a.mode() == TransitionMode::Set ? std::string("unbounded") : std::to_string(a.arity())) << '\n';
  out << "states:";
  for (std::size_t q = 0; q < a.size(); ++q) out << ' ' << a.name(static_cast<int>(q));
  out << "\ninitial: " << (a.size() ? a.name(a.initial()) : std::string()) << "\nprio:";
  for (std::size_t q = 0; q < a.size(); ++q) out << ' ' << a.name(static_cast<int>(q)) << '=' << a.priority(static_cast<int>(q));
  out << '\n';
  const char open = a.mode() == TransitionMode::Set ? '{' : '(';
  const char close = a.mode() == TransitionMode::Set ? '}' : ')';
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Letter c = 0; c < a.letter_count(); ++c)
      for (const auto& t : a.transitions(static_cast<int>(q), c)) {
        out << a.name(static_cast<int>(q)) << " , {";
        auto val = valuation_of(c, a.sigma());
        for (std::size_t i = 0; i < val.size(); ++i) out << (i ? " " : "") << val[i];
        out << "} -> " << open;
        for (std::size_t i = 0; i < t.size(); ++i) out << (i ? " " : "") << a.name(t[i]);
        out << close << '\n';
      }
  return out.str();
}

// ---------------------------------------------------------------------------
// Emptiness

Emptiness emptiness(const Npta& a) {
  ParityGame g;
  for (std::size_t q = 0; q < a.size(); ++q) g.add_position(Player::Eve, a.priority(static_cast<int>(q)));
  std::map<StateTuple, int> tuple_pos;
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Letter c = 0; c < a.letter_count(); ++c)
      for (const auto& t : a.transitions(static_cast<int>(q), c)) {
        auto [it, fresh] = tuple_pos.emplace(t, 0);
        if (fresh) {
          it->second = g.add_position(Player::Adam, 0);
          for (int p : t) g.add_move(it->second, p);
        }
        g.add_move(static_cast<int>(q), it->second);
      }
  Emptiness result;
  result.live.assign(a.size(), 0);
  if (a.size() == 0) return result;
  auto sol = solve_parity(g);
  for (std::size_t q = 0; q < a.size(); ++q) result.live[q] = sol.eve_wins[q];
  result.empty = !result.live[a.initial()];
  return result;
}

bool is_empty(const Npta& a) { return emptiness(a).empty; }

// ---------------------------------------------------------------------------
// Finite-tree acceptance helpers

namespace {

// Every left vertex has a partner and the right side is saturated by a matching.
template <class Ok>
bool covers(int left, int right, Ok&& ok) {
  if (left < right) return false;
  std::vector<std::vector<int>> adj(right);
  for (int l = 0; l < left; ++l) {
    bool any = false;
    for (int r = 0; r < right; ++r)
      if (ok(l, r)) {
        any = true;
        adj[r].push_back(l);
      }
    if (!any) return false;
  }
  return max_matching(adj, left) == right;
}

// Does a node whose children accept the given state sets fit the transition t?
bool fits(const std::vector<std::vector<char>>& child_accepts, const StateTuple& t, TransitionMode mode) {
  int k = static_cast<int>(child_accepts.size());
  int n = static_cast<int>(t.size());
  if (mode == TransitionMode::Tuple) {
    if (n != k) return false;
    return has_perfect_matching(k, [&](int j, int s) { return child_accepts[j][t[s]] != 0; });
  }
  if ((n == 0) != (k == 0)) return false;
  return covers(k, n, [&](int j, int s) { return child_accepts[j][t[s]] != 0; });
}

}  // namespace

bool accepts_finite(const Npta& a, const KripkeTree& t) {
  if (a.size() == 0) return false;
  std::vector<std::vector<char>> acc(t.size(), std::vector<char>(a.size(), 0));
  for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
    Letter c = letter_of(t.valuation(v), a.sigma());
    std::vector<std::vector<char>> kids;
    for (int ch : t.children(v)) kids.push_back(acc[ch]);
    for (std::size_t q = 0; q < a.size(); ++q)
      for (const auto& tup : a.transitions(static_cast<int>(q), c))
        if (fits(kids, tup, a.mode())) {
          acc[v][q] = 1;
          break;
        }
  }
  return acc[0][a.initial()] != 0;
}

// ---------------------------------------------------------------------------
// Prefix automata

FinTreeAutomaton prefix_automaton(const Npta& a, const Signature& sigma) {
  FinTreeAutomaton b;
  b.sigma = sigma;
  b.mode = a.mode();
  b.arity = a.arity();
  if (sigma.size() > 20) throw std::invalid_argument("signature too large for an explicit alphabet");
  auto em = emptiness(a);
  if (em.empty) return b;

  std::vector<int> renumber(a.size(), -1);
  int count = 0;
  // Initial state first so that b.initial = 0.
  renumber[a.initial()] = count++;
  b.names.push_back(a.name(a.initial()));
  for (std::size_t q = 0; q < a.size(); ++q)
    if (em.live[q] && renumber[q] < 0) {
      renumber[q] = count++;
      b.names.push_back(a.name(static_cast<int>(q)));
    }
  std::size_t letters = std::size_t{1} << sigma.size();
  b.delta.assign(count, std::vector<std::vector<StateTuple>>(letters));
  b.leaf_cut.assign(count, std::vector<char>(letters, 0));
  b.leaf_real.assign(count, std::vector<char>(letters, 0));

  // An A-letter is compatible with a sigma-letter when they agree on the shared propositions.
  std::vector<std::pair<int, int>> shared;  // (position in A's sigma, position in sigma)
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    int j = a.sigma().index_of(sigma[i]);
    if (j >= 0) shared.emplace_back(j, static_cast<int>(i));
  }
  auto compatible = [&](Letter ca, Letter cs) {
    for (auto [ja, js] : shared)
      if (((ca >> ja) & 1u) != ((cs >> js) & 1u)) return false;
    return true;
  };

  for (std::size_t q = 0; q < a.size(); ++q) {
    if (renumber[q] < 0) continue;
    int bq = renumber[q];
    for (Letter ca = 0; ca < a.letter_count(); ++ca)
      for (const auto& t : a.transitions(static_cast<int>(q), ca)) {
        bool live = std::all_of(t.begin(), t.end(), [&](int p) { return em.live[p] != 0; });
        if (!live) continue;
        StateTuple bt;
        for (int p : t) bt.push_back(renumber[p]);
        std::sort(bt.begin(), bt.end());
        for (Letter cs = 0; cs < letters; ++cs) {
          if (!compatible(ca, cs)) continue;
          b.leaf_cut[bq][cs] = 1;
          if (bt.empty()) {
            b.leaf_real[bq][cs] = 1;
            continue;
          }
          auto& list = b.delta[bq][cs];
          auto it = std::lower_bound(list.begin(), list.end(), bt);
          if (it == list.end() || *it != bt) list.insert(it, bt);
        }
      }
  }
  return b;
}

bool accepts(const FinTreeAutomaton& b, const KripkeTree& t, int cut_depth) {
  if (b.empty()) return false;
  std::vector<std::vector<char>> acc(t.size(), std::vector<char>(b.size(), 0));
  for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
    Letter c = letter_of(t.valuation(v), b.sigma);
    bool cut = cut_depth < 0 ? t.children(v).empty() : t.depth(v) >= cut_depth;
    if (cut || t.children(v).empty()) {
      for (std::size_t q = 0; q < b.size(); ++q) acc[v][q] = cut ? b.leaf_cut[q][c] : b.leaf_real[q][c];
      continue;
    }
    std::vector<std::vector<char>> kids;
    for (int ch : t.children(v)) kids.push_back(acc[ch]);
    for (std::size_t q = 0; q < b.size(); ++q)
      for (const auto& tup : b.delta[q][c])
        if (fits(kids, tup, b.mode)) {
          acc[v][q] = 1;
          break;
        }
  }
  return acc[0][b.initial] != 0;
}

// ---------------------------------------------------------------------------
// Tallness chain

ConsistencyReport tallness_chain(const FinTreeAutomaton& left, const FinTreeAutomaton& right, int bound,
                                 Budget& budget) {
  ConsistencyReport r;
  r.bound = bound;
  if (left.empty() || right.empty()) {
    r.first_failure = 0;
    return r;
  }
  if (!(left.sigma == right.sigma)) throw std::invalid_argument("prefix automata over different signatures");
  if (left.mode != right.mode) throw std::invalid_argument("prefix automata in different transition modes");
  const std::size_t n1 = left.size(), n2 = right.size();
  const std::size_t letters = left.letter_count();
  r.product_size = static_cast<int>(n1 * n2);
  auto idx = [&](std::size_t p, std::size_t p2) { return p * n2 + p2; };
  const std::size_t init = idx(left.initial, right.initial);

  // Pairs with a common real leaf letter belong to every S_i.
  std::vector<char> always(n1 * n2, 0);
  std::vector<char> cur(n1 * n2, 0);
  for (std::size_t p = 0; p < n1; ++p)
    for (std::size_t p2 = 0; p2 < n2; ++p2)
      for (Letter c = 0; c < letters; ++c) {
        if (left.leaf_cut[p][c] && right.leaf_cut[p2][c]) cur[idx(p, p2)] = 1;
        if (left.leaf_real[p][c] && right.leaf_real[p2][c]) always[idx(p, p2)] = 1;
      }

  auto compatible = [&](const StateTuple& t, const StateTuple& t2, const std::vector<char>& s) {
    if (left.mode == TransitionMode::Tuple) {
      if (t.size() != t2.size()) return false;
      return has_perfect_matching(static_cast<int>(t.size()), [&](int i, int j) { return s[idx(t[i], t2[j])] != 0; });
    }
    for (int p : t)
      if (std::none_of(t2.begin(), t2.end(), [&](int p2) { return s[idx(p, p2)] != 0; })) return false;
    for (int p2 : t2)
      if (std::none_of(t.begin(), t.end(), [&](int p) { return s[idx(p, p2)] != 0; })) return false;
    return true;
  };

  auto count = [](const std::vector<char>& s) { return static_cast<std::size_t>(std::count(s.begin(), s.end(), 1)); };
  r.chain_sizes.push_back(count(cur));
  r.levels.push_back(cur);
  if (!cur[init]) r.first_failure = 0;
  // A strictly descending chain of subsets of B stabilizes within |B| steps.
  for (int i = 0;; ++i) {
    std::vector<char> next(n1 * n2, 0);
    for (std::size_t p = 0; p < n1; ++p)
      for (std::size_t p2 = 0; p2 < n2; ++p2) {
        std::size_t k = idx(p, p2);
        if (!cur[k]) continue;
        if (always[k]) {
          next[k] = 1;
          continue;
        }
        bool found = false;
        for (Letter c = 0; c < letters && !found; ++c)
          for (const auto& t : left.delta[p][c]) {
            for (const auto& t2 : right.delta[p2][c]) {
              budget.charge();
              if (compatible(t, t2, cur)) {
                found = true;
                break;
              }
            }
            if (found) break;
          }
        next[k] = found ? 1 : 0;
      }
    if (next == cur) {
      r.stabilized_at = i;
      break;
    }
    cur = std::move(next);
    r.chain_sizes.push_back(count(cur));
    r.levels.push_back(cur);
    if (!cur[init] && r.first_failure < 0) r.first_failure = i + 1;
  }
  r.all_n = cur[init] != 0;
  return r;
}

ConsistencyReport consistency_report(const Npta& a, const Npta& a2, const Signature& sigma, Budget& budget) {
  if (a.mode() != a2.mode()) throw std::invalid_argument("automata in different transition modes");
  if (a.mode() == TransitionMode::Tuple && a.arity() != a2.arity()) throw std::invalid_argument("arity mismatch");
  auto b = prefix_automaton(a, sigma);
  auto b2 = prefix_automaton(a2, sigma);
  int bound = static_cast<int>(a.size() * a2.size()) + 1;
  return tallness_chain(b, b2, bound, budget);
}

bool consistency_for_all_n(const Npta& a, const Npta& a2, const Signature& sigma, int d) {
  if (a.mode() == TransitionMode::Tuple && (a.arity() != d || a2.arity() != d))
    throw std::invalid_argument("arity mismatch");
  return consistency_report(a, a2, sigma).all_n;
}

std::optional<KripkeTree> common_prefix(const FinTreeAutomaton& left, const FinTreeAutomaton& right,
                                        const ConsistencyReport& report, int n) {
  if (left.empty() || right.empty() || report.levels.empty()) return std::nullopt;
  const std::size_t n2 = right.size();
  const std::size_t letters = left.letter_count();
  auto level = [&](int h) -> const std::vector<char>& {
    return report.levels[std::min<std::size_t>(h, report.levels.size() - 1)];
  };
  auto in = [&](int h, int p, int p2) { return level(h)[p * n2 + p2] != 0; };
  if (!in(n, left.initial, right.initial)) return std::nullopt;

  std::function<KripkeTree(int, int, int)> build = [&](int p, int p2, int h) -> KripkeTree {
    if (h == 0) {
      for (Letter c = 0; c < letters; ++c)
        if (left.leaf_cut[p][c] && right.leaf_cut[p2][c]) return KripkeTree::leaf(valuation_of(c, left.sigma));
      throw std::logic_error("chain level 0 holds a pair without a common letter");
    }
    for (Letter c = 0; c < letters; ++c)
      if (left.leaf_real[p][c] && right.leaf_real[p2][c]) return KripkeTree::leaf(valuation_of(c, left.sigma));
    for (Letter c = 0; c < letters; ++c)
      for (const auto& t : left.delta[p][c])
        for (const auto& t2 : right.delta[p2][c]) {
          std::vector<std::pair<int, int>> pairs;
          if (left.mode == TransitionMode::Tuple) {
            if (t.size() != t2.size()) continue;
            std::vector<std::vector<int>> adj(t.size());
            for (std::size_t i = 0; i < t.size(); ++i)
              for (std::size_t j = 0; j < t2.size(); ++j)
                if (in(h - 1, t[i], t2[j])) adj[i].push_back(static_cast<int>(j));
            std::vector<int> match;
            if (max_matching(adj, static_cast<int>(t2.size()), &match) != static_cast<int>(t.size())) continue;
            for (std::size_t j = 0; j < t2.size(); ++j) pairs.emplace_back(t[match[j]], t2[j]);
          } else {
            bool ok = true;
            for (int x : t) {
              auto it = std::find_if(t2.begin(), t2.end(), [&](int y) { return in(h - 1, x, y); });
              if (it == t2.end()) ok = false;
              else pairs.emplace_back(x, *it);
            }
            for (int y : t2) {
              auto it = std::find_if(t.begin(), t.end(), [&](int x) { return in(h - 1, x, y); });
              if (it == t.end()) ok = false;
              else pairs.emplace_back(*it, y);
            }
            if (!ok) continue;
            std::sort(pairs.begin(), pairs.end());
            pairs.erase(std::unique(pairs.begin(), pairs.end()), pairs.end());
          }
          std::vector<KripkeTree> kids;
          for (auto [x, y] : pairs) kids.push_back(build(x, y, h - 1));
          return KripkeTree::make(valuation_of(c, left.sigma), kids);
        }
    throw std::logic_error("chain level holds a pair without a compatible transition");
  };
  return build(left.initial, right.initial, n);
}

std::optional<KripkeTree> lift_prefix(const Npta& a, const KripkeTree& t, const Signature& sigma, int cut_depth,
                                      LiftMode mode) {
  if (a.size() == 0) return std::nullopt;
  if (mode == LiftMode::Preimage && a.mode() != TransitionMode::Tuple)
    throw std::invalid_argument("preimage lifting needs tuple mode");
  auto em = emptiness(a);
  std::vector<std::pair<int, int>> shared;  // (position in a's sigma, position in sigma)
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    int j = a.sigma().index_of(sigma[i]);
    if (j >= 0) shared.emplace_back(j, static_cast<int>(i));
  }
  struct Choice {
    Letter letter = 0;
    StateTuple tuple;
    std::vector<int> target;  // child of t per slot (tuple/preimage) or state per child (set)
    bool ok = false;
  };
  std::vector<std::vector<Choice>> choice(t.size(), std::vector<Choice>(a.size()));
  for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
    Letter cs = letter_of(t.valuation(v), sigma);
    const auto& kids = t.children(v);
    const int k = static_cast<int>(kids.size());
    bool cut = cut_depth < 0 ? kids.empty() : t.depth(v) >= cut_depth;
    for (std::size_t q = 0; q < a.size(); ++q) {
      if (!em.live[q]) continue;
      Choice& ch = choice[v][q];
      for (Letter ca = 0; ca < a.letter_count() && !ch.ok; ++ca) {
        bool compatible = true;
        for (auto [ja, js] : shared) compatible = compatible && (((ca >> ja) & 1u) == ((cs >> js) & 1u));
        if (!compatible) continue;
        for (const auto& tup : a.transitions(static_cast<int>(q), ca)) {
          if (!std::all_of(tup.begin(), tup.end(), [&](int p) { return em.live[p] != 0; })) continue;
          const int n = static_cast<int>(tup.size());
          auto ok = [&](int slot, int j) { return choice[kids[j]][tup[slot]].ok; };
          if (cut) {
            ch = {ca, tup, {}, true};
            break;
          }
          if (k == 0) {
            if (n == 0) {
              ch = {ca, tup, {}, true};
              break;
            }
            continue;
          }
          std::vector<int> target;
          if (a.mode() == TransitionMode::Tuple && mode == LiftMode::Isomorphic) {
            if (n != k) continue;
            std::vector<std::vector<int>> adj(n);
            for (int s = 0; s < n; ++s)
              for (int j = 0; j < k; ++j)
                if (ok(s, j)) adj[s].push_back(j);
            std::vector<int> match;
            if (max_matching(adj, k, &match) != n) continue;
            target.assign(n, -1);
            for (int j = 0; j < k; ++j) target[match[j]] = j;
          } else if (a.mode() == TransitionMode::Tuple) {
            // Every slot to some child, every child hit.
            if (n < k) continue;
            std::vector<std::vector<int>> adj(k);
            bool all = true;
            for (int s = 0; s < n && all; ++s) {
              bool any = false;
              for (int j = 0; j < k; ++j)
                if (ok(s, j)) {
                  any = true;
                  adj[j].push_back(s);
                }
              all = any;
            }
            if (!all) continue;
            std::vector<int> match;
            if (max_matching(adj, n, &match) != k) continue;
            target.assign(n, -1);
            for (int s = 0; s < n; ++s) {
              if (match[s] >= 0) target[s] = match[s];
              else
                for (int j = 0; j < k && target[s] < 0; ++j)
                  if (ok(s, j)) target[s] = j;
            }
          } else {
            // Set mode: every child gets a state of the set, every state used.
            if (n == 0 || k < n) continue;
            std::vector<std::vector<int>> adj(n);
            bool all = true;
            for (int j = 0; j < k && all; ++j) {
              bool any = false;
              for (int s = 0; s < n; ++s)
                if (ok(s, j)) {
                  any = true;
                  adj[s].push_back(j);
                }
              all = any;
            }
            if (!all) continue;
            std::vector<int> match;
            if (max_matching(adj, k, &match) != n) continue;
            target.assign(k, -1);
            for (int j = 0; j < k; ++j) {
              if (match[j] >= 0) target[j] = tup[match[j]];
              else
                for (int s = 0; s < n && target[j] < 0; ++s)
                  if (ok(s, j)) target[j] = tup[s];
            }
          }
          ch = {ca, tup, std::move(target), true};
          break;
        }
      }
    }
  }
  if (!choice[0][a.initial()].ok) return std::nullopt;

  std::function<KripkeTree(int, int)> build = [&](int v, int q) -> KripkeTree {
    const Choice& ch = choice[v][q];
    std::vector<std::string> val = valuation_of(ch.letter, a.sigma());
    for (const auto& p : t.valuation(v))
      if (sigma.contains(p) && !a.sigma().contains(p)) val.push_back(p);
    std::sort(val.begin(), val.end());
    std::vector<KripkeTree> kids;
    const auto& tkids = t.children(v);
    bool cut = cut_depth < 0 ? tkids.empty() : t.depth(v) >= cut_depth;
    if (!cut && !tkids.empty()) {
      if (a.mode() == TransitionMode::Set) {
        for (std::size_t j = 0; j < tkids.size(); ++j) kids.push_back(build(tkids[j], ch.target[j]));
      } else {
        for (std::size_t s = 0; s < ch.tuple.size(); ++s) kids.push_back(build(tkids[ch.target[s]], ch.tuple[s]));
      }
    }
    return KripkeTree::make(val, kids);
  };
  return build(0, a.initial());
}

std::optional<KripkeTree> witness_prefix(const Npta& a, int depth) {
  auto em = emptiness(a);
  if (em.empty) return std::nullopt;
  std::function<KripkeTree(int, int)> build = [&](int q, int h) -> KripkeTree {
    std::optional<std::pair<Letter, const StateTuple*>> pick;
    for (Letter c = 0; c < a.letter_count(); ++c)
      for (const auto& t : a.transitions(q, c)) {
        if (!std::all_of(t.begin(), t.end(), [&](int p) { return em.live[p] != 0; })) continue;
        if (t.empty()) return KripkeTree::leaf(valuation_of(c, a.sigma()));
        if (!pick) pick = std::make_pair(c, &t);
      }
    if (!pick) throw std::logic_error("live state without a live transition");
    if (h >= depth) return KripkeTree::leaf(valuation_of(pick->first, a.sigma()));
    std::vector<KripkeTree> kids;
    for (int p : *pick->second) kids.push_back(build(p, h + 1));
    return KripkeTree::make(valuation_of(pick->first, a.sigma()), kids);
  };
  return build(a.initial(), 0);
}

// ---------------------------------------------------------------------------
// Duplication safety

Npta duplication_safe_closure(const Npta& a) {
  if (a.mode() != TransitionMode::Tuple || a.arity() < 2)
    throw std::invalid_argument("duplication-safe closure needs tuple mode with arity >= 2");
  Npta b = a;
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Letter c = 0; c < a.letter_count(); ++c)
      for (const auto& t : a.transitions(static_cast<int>(q), c))
        if (t.size() == 1) b.add_transition(static_cast<int>(q), c, {t[0], t[0]});
  return b;
}

bool is_duplication_safe(const Npta& a) {
  if (a.mode() != TransitionMode::Tuple || a.arity() < 2) return false;
  for (std::size_t q = 0; q < a.size(); ++q)
    for (Letter c = 0; c < a.letter_count(); ++c) {
      const auto& list = a.transitions(static_cast<int>(q), c);
      for (const auto& t : list)
        if (t.size() == 1 && !std::binary_search(list.begin(), list.end(), StateTuple{t[0], t[0]})) return false;
    }
  return true;
}

}  // namespace modsep
