#include "modsep/oracle.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <tuple>
#include <unordered_map>

#include "modsep/matching.hpp"
#include "modsep/translate.hpp"

namespace modsep {

std::string to_string(SearchOutcome o) {
  switch (o) {
    case SearchOutcome::Found:
      return "found";
    case SearchOutcome::ExhaustedNone:
      return "exhausted-none";
    case SearchOutcome::BudgetHit:
      return "budget-hit";
  }
  return "?";
}

namespace {

using Info = std::vector<char>;

// How one side of a joint search evaluates prefix trees bottom-up.
class Side {
 public:
  virtual ~Side() = default;
  const Signature& alphabet() const { return alphabet_; }
  virtual Info evaluate(Letter c, const std::vector<const Info*>& kids, bool cut) const = 0;
  virtual bool accepted(const Info& info) const = 0;
  // Subtrees whose info rules out every acceptance can be dropped.
  virtual bool useless(const Info&) const { return false; }

 protected:
  Signature alphabet_;
};

// Truth vectors of the subformulas of a modal formula (evaluated as if every leaf were real).
class ModalSide : public Side {
 public:
  ModalSide(const Formula& phi, const Signature& alphabet) {
    alphabet_ = alphabet;
    collect(normalize(phi));
    root_ = index_.at(normalize(phi));
  }

  Info evaluate(Letter c, const std::vector<const Info*>& kids, bool) const override {
    Info v(subs_.size(), 0);
    for (std::size_t i = 0; i < subs_.size(); ++i) {
      const Formula& f = subs_[i];
      switch (f.kind()) {
        case Kind::True:
          v[i] = 1;
          break;
        case Kind::False:
          break;
        case Kind::Prop: {
          int bit = alphabet_.index_of(f.name());
          bool holds = bit >= 0 && ((c >> bit) & 1u);
          v[i] = holds != f.negated();
          break;
        }
        case Kind::And:
          v[i] = std::all_of(f.args().begin(), f.args().end(), [&](const Formula& a) { return v[index_.at(a)] != 0; });
          break;
        case Kind::Or:
          v[i] = std::any_of(f.args().begin(), f.args().end(), [&](const Formula& a) { return v[index_.at(a)] != 0; });
          break;
        case Kind::Dia:
        case Kind::Box: {
          int b = index_.at(f.body());
          int yes = 0;
          for (const Info* k : kids) yes += (*k)[b] ? 1 : 0;
          int no = static_cast<int>(kids.size()) - yes;
          v[i] = f.kind() == Kind::Dia ? yes >= f.grade() : no <= f.grade();
          break;
        }
        default:
          throw std::invalid_argument("modal evaluation met a fixpoint");
      }
    }
    return v;
  }
  bool accepted(const Info& info) const override { return info[root_] != 0; }

 private:
  void collect(const Formula& f) {
    if (index_.count(f)) return;
    for (const auto& a : f.args()) collect(a);
    index_.emplace(f, static_cast<int>(subs_.size()));
    subs_.push_back(f);
  }
  std::vector<Formula> subs_;
  std::unordered_map<Formula, int, FormulaHash> index_;
  int root_ = 0;
};

// Sets of automaton states from which the subtree extends to an accepted tree. Node letters are
// over the side's alphabet; the automaton reads any letter agreeing with it on shared propositions.
class AutomatonSide : public Side {
 public:
  AutomatonSide(Npta a, const Signature& alphabet) : a_(std::move(a)) {
    alphabet_ = alphabet;
    live_ = emptiness(a_).live;
    std::vector<std::pair<int, int>> shared;
    for (std::size_t i = 0; i < alphabet.size(); ++i) {
      int j = a_.sigma().index_of(alphabet[i]);
      if (j >= 0) shared.emplace_back(j, static_cast<int>(i));
    }
    compatible_.resize(std::size_t{1} << alphabet.size());
    for (Letter c = 0; c < compatible_.size(); ++c)
      for (Letter ca = 0; ca < a_.letter_count(); ++ca) {
        bool ok = true;
        for (auto [ja, js] : shared) ok = ok && (((ca >> ja) & 1u) == ((c >> js) & 1u));
        if (ok) compatible_[c].push_back(ca);
      }
  }

  Info evaluate(Letter c, const std::vector<const Info*>& kids, bool cut) const override {
    Info v(a_.size(), 0);
    for (std::size_t q = 0; q < a_.size(); ++q) {
      if (!live_[q]) continue;
      for (Letter ca : compatible_[c]) {
        for (const auto& t : a_.transitions(static_cast<int>(q), ca)) {
          if (!std::all_of(t.begin(), t.end(), [&](int p) { return live_[p] != 0; })) continue;
          if (cut || fits(kids, t)) {
            v[q] = 1;
            break;
          }
        }
        if (v[q]) break;
      }
    }
    return v;
  }
  bool accepted(const Info& info) const override { return info[a_.initial()] != 0; }
  bool useless(const Info& info) const override {
    return std::none_of(info.begin(), info.end(), [](char b) { return b != 0; });
  }

 private:
  bool fits(const std::vector<const Info*>& kids, const StateTuple& t) const {
    int k = static_cast<int>(kids.size());
    int n = static_cast<int>(t.size());
    if (a_.mode() == TransitionMode::Tuple) {
      if (n != k) return false;
      return has_perfect_matching(k, [&](int j, int s) { return (*kids[j])[t[s]] != 0; });
    }
    if ((n == 0) != (k == 0) || k < n) return false;
    std::vector<std::vector<int>> adj(n);
    for (int j = 0; j < k; ++j) {
      bool any = false;
      for (int s = 0; s < n; ++s)
        if ((*kids[j])[t[s]]) {
          any = true;
          adj[s].push_back(j);
        }
      if (!any) return false;
    }
    return max_matching(adj, k) == n;
  }

  Npta a_;
  std::vector<char> live_;
  std::vector<std::vector<Letter>> compatible_;
};

// Representative trees live in one arena per search and share their subtrees; they are only
// spelled out for witnesses.
struct ShapeArena {
  std::vector<Letter> letter;
  std::vector<std::pair<int, int>> span;  // into kids
  std::vector<int> kids;

  int add(Letter c, const std::vector<int>& children) {
    letter.push_back(c);
    span.emplace_back(static_cast<int>(kids.size()), static_cast<int>(children.size()));
    kids.insert(kids.end(), children.begin(), children.end());
    return static_cast<int>(letter.size()) - 1;
  }

  KripkeTree build(int node, const Signature& alphabet) const {
    std::vector<KripkeTree> sub;
    for (int i = 0; i < span[node].second; ++i) sub.push_back(build(kids[span[node].first + i], alphabet));
    return KripkeTree::make(valuation_of(letter[node], alphabet), sub);
  }
};

struct Item {
  int key;
  Info info;
  int rep;  // arena node
};

class BudgetCounter {
 public:
  explicit BudgetCounter(std::uint64_t limit) : limit_(limit) {}
  bool charge(std::uint64_t units = 1) {
    used_ += units;
    return used_ <= limit_;
  }
  std::uint64_t used() const { return used_; }

 private:
  std::uint64_t limit_;
  std::uint64_t used_ = 0;
};

// Shared canonical names for linked classes of prefixes: level, sigma-letter, child classes.
class KeyTable {
 public:
  KeyTable(const Signature& sigma, Linkage link) : sigma_(sigma), link_(link) {}
  int key(int height, Letter c, const Signature& alphabet, std::vector<int> kids) {
    std::sort(kids.begin(), kids.end());
    if (link_ == Linkage::Bisimilar) kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    // Below the probe depth nothing is linked, so every cut leaf shares one class per letter.
    auto k = std::make_tuple(height, project_letter(c, alphabet, sigma_), std::move(kids));
    auto [it, fresh] = table_.emplace(std::move(k), 0);
    if (fresh) it->second = static_cast<int>(table_.size()) - 1;
    return it->second;
  }

 private:
  Signature sigma_;
  Linkage link_;
  std::map<std::tuple<int, Letter, std::vector<int>>, int> table_;
};

// Multisets of size `size` over {0..n-1}, nondecreasing index vectors.
bool for_each_multiset(int n, int size, const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> pick(size, 0);
  if (size == 0) return f(pick);
  if (n == 0) return true;
  while (true) {
    if (!f(pick)) return false;
    int i = size - 1;
    while (i >= 0 && pick[i] == n - 1) --i;
    if (i < 0) return true;
    ++pick[i];
    for (int j = i + 1; j < size; ++j) pick[j] = pick[i];
  }
}

// All classes of n-prefixes of outdegree <= d on one side; false when the budget ran out.
bool prefix_items(const Side& side, KeyTable& keys, int n, int d, BudgetCounter& budget, ShapeArena& arena,
                  std::vector<Item>& out) {
  const Letter letters = static_cast<Letter>(std::size_t{1} << side.alphabet().size());
  std::vector<Item> level;
  std::map<std::pair<int, Info>, int> seen;
  auto add = [&](std::vector<Item>& target, int key, Info info, Letter c, const std::vector<const Item*>& kids) {
    if (side.useless(info)) return;
    auto [it, fresh] = seen.emplace(std::make_pair(key, info), 0);
    if (!fresh) return;
    std::vector<int> children;
    for (const Item* k : kids) children.push_back(k->rep);
    target.push_back({key, std::move(info), arena.add(c, children)});
  };
  for (Letter c = 0; c < letters; ++c) {
    if (!budget.charge()) return false;
    add(level, keys.key(0, c, side.alphabet(), {}), side.evaluate(c, {}, true), c, {});
  }
  for (int h = 1; h <= n; ++h) {
    std::vector<Item> next;
    seen.clear();
    bool top = h == n;
    for (Letter c = 0; c < letters; ++c) {
      // A real leaf at height h.
      if (!budget.charge()) return false;
      add(next, keys.key(h, c, side.alphabet(), {}), side.evaluate(c, {}, false), c, {});
      for (int k = 1; k <= d; ++k) {
        bool ok = for_each_multiset(static_cast<int>(level.size()), k, [&](const std::vector<int>& pick) {
          if (!budget.charge()) return false;
          std::vector<const Item*> kids;
          std::vector<const Info*> infos;
          std::vector<int> kid_keys;
          for (int i : pick) {
            kids.push_back(&level[i]);
            infos.push_back(&level[i].info);
            kid_keys.push_back(level[i].key);
          }
          Info info = side.evaluate(c, infos, false);
          if (top && !side.accepted(info)) return true;
          add(next, keys.key(h, c, side.alphabet(), kid_keys), std::move(info), c, kids);
          return true;
        });
        if (!ok) return false;
      }
    }
    level = std::move(next);
  }
  out.clear();
  for (auto& it : level)
    if (side.accepted(it.info)) out.push_back(std::move(it));
  return true;
}

// Leaves at depth < n of a tree of n-prefix items are real, cut leaves are at depth n. The item
// heights are counted from the cut, so a real leaf gets key (h, c, {}) for its height h > 0.
std::unique_ptr<Side> side_for(const Formula& phi, const Signature& sigma, int n, int d) {
  Formula f = normalize(phi);
  Signature alphabet = signature_of(f).unite(sigma);
  if (is_modal_logic(f) && modal_depth(f) <= n) return std::make_unique<ModalSide>(f, alphabet);
  return std::make_unique<AutomatonSide>(muml_to_npta(f, d, alphabet), alphabet);
}

SearchOutcome joint_search(const Side& left, const Side& right, const Signature& sigma, int n, int d,
                           std::uint64_t budget, Linkage link, std::uint64_t& work,
                           const std::function<bool(const KripkeTree&, const KripkeTree&)>& visit) {
  KeyTable keys(sigma, link);
  BudgetCounter counter(budget);
  std::vector<Item> li, ri;
  ShapeArena la, ra;
  bool complete =
      prefix_items(left, keys, n, d, counter, la, li) && prefix_items(right, keys, n, d, counter, ra, ri);
  work = counter.used();
  if (!complete) return SearchOutcome::BudgetHit;
  std::map<int, std::vector<const Item*>> by_key;
  for (const auto& it : ri) by_key[it.key].push_back(&it);
  bool found = false;
  for (const auto& l : li) {
    auto it = by_key.find(l.key);
    if (it == by_key.end()) continue;
    for (const Item* r : it->second) {
      found = true;
      if (!visit(la.build(l.rep, left.alphabet()), ra.build(r->rep, right.alphabet()))) return SearchOutcome::Found;
    }
  }
  return found ? SearchOutcome::Found : SearchOutcome::ExhaustedNone;
}

}  // namespace

JointSearch joint_consistency_bruteforce(const Formula& phi, const Formula& phi2, const Signature& sigma, int n, int d,
                                         std::uint64_t budget, Linkage link) {
  auto left = side_for(phi, sigma, n, d);
  auto right = side_for(phi2, sigma, n, d);
  JointSearch r;
  r.outcome = joint_search(*left, *right, sigma, n, d, budget, link, r.work, [&](const KripkeTree& a, const KripkeTree& b) {
    r.witness = std::make_pair(a, b);
    return false;
  });
  return r;
}

JointSearch joint_consistency_bruteforce(const Npta& a, const Npta& a2, const Signature& sigma, int n,
                                         std::uint64_t budget, Linkage link) {
  if (a.mode() != TransitionMode::Tuple || a2.mode() != TransitionMode::Tuple)
    throw std::invalid_argument("brute-force search needs tuple-mode automata");
  int d = std::max(a.arity(), a2.arity());
  AutomatonSide left(a, sigma), right(a2, sigma);
  JointSearch r;
  r.outcome = joint_search(left, right, sigma, n, d, budget, link, r.work, [&](const KripkeTree& x, const KripkeTree& y) {
    r.witness = std::make_pair(x, y);
    return false;
  });
  return r;
}

SearchOutcome for_each_joint_witness(const Formula& phi, const Formula& phi2, const Signature& sigma, int n, int d,
                                     std::uint64_t budget,
                                     const std::function<bool(const KripkeTree&, const KripkeTree&)>& visit) {
  auto left = side_for(phi, sigma, n, d);
  auto right = side_for(phi2, sigma, n, d);
  std::uint64_t work = 0;
  return joint_search(*left, *right, sigma, n, d, budget, Linkage::Bisimilar, work, visit);
}

// ---------------------------------------------------------------------------
// Knaster-Tarski evaluation

namespace {

using NodeSet = std::vector<char>;

NodeSet eval_set(const KripkeTree& m, const Formula& f, std::map<std::string, NodeSet>& env) {
  const std::size_t n = m.size();
  NodeSet out(n, 0);
  switch (f.kind()) {
    case Kind::True:
      out.assign(n, 1);
      break;
    case Kind::False:
      break;
    case Kind::Prop:
      for (std::size_t v = 0; v < n; ++v) out[v] = m.holds(static_cast<int>(v), f.name()) != f.negated();
      break;
    case Kind::Not: {
      NodeSet s = eval_set(m, f.body(), env);
      for (std::size_t v = 0; v < n; ++v) out[v] = !s[v];
      break;
    }
    case Kind::And:
    case Kind::Or: {
      bool conj = f.kind() == Kind::And;
      out.assign(n, conj ? 1 : 0);
      for (const auto& a : f.args()) {
        NodeSet s = eval_set(m, a, env);
        for (std::size_t v = 0; v < n; ++v) out[v] = conj ? (out[v] && s[v]) : (out[v] || s[v]);
      }
      break;
    }
    case Kind::Dia:
    case Kind::Box: {
      NodeSet s = eval_set(m, f.body(), env);
      for (std::size_t v = 0; v < n; ++v) {
        int yes = 0, total = 0;
        for (int c : m.children(static_cast<int>(v))) {
          ++total;
          yes += s[c] ? 1 : 0;
        }
        out[v] = f.kind() == Kind::Dia ? yes >= f.grade() : total - yes <= f.grade();
      }
      break;
    }
    case Kind::Var: {
      auto it = env.find(f.name());
      if (it == env.end()) throw std::invalid_argument("unbound variable " + f.name());
      out = it->second;
      break;
    }
    case Kind::Mu:
    case Kind::Nu: {
      auto saved = env.find(f.name()) != env.end() ? std::optional<NodeSet>(env[f.name()]) : std::nullopt;
      NodeSet cur(n, f.kind() == Kind::Nu ? 1 : 0);
      while (true) {
        env[f.name()] = cur;
        NodeSet next = eval_set(m, f.body(), env);
        if (next == cur) break;
        cur = std::move(next);
      }
      out = cur;
      if (saved) env[f.name()] = *saved;
      else env.erase(f.name());
      break;
    }
  }
  return out;
}

}  // namespace

bool fixpoint_eval(const KripkeTree& m, const Formula& phi) {
  std::map<std::string, NodeSet> env;
  return eval_set(m, phi, env)[0] != 0;
}

std::optional<KripkeTree> equivalence_bruteforce(const Formula& phi, const Formula& psi, int d, int depth) {
  Signature sig = signature_of(phi).unite(signature_of(psi));
  std::optional<KripkeTree> witness;
  for_each_tree(sig, d, depth, [&](const KripkeTree& t) {
    if (fixpoint_eval(t, phi) != fixpoint_eval(t, psi)) {
      witness = t;
      return false;
    }
    return true;
  });
  return witness;
}

// ---------------------------------------------------------------------------
// Quotient membership by preimage search

bool bisim_quotient_member_bruteforce(const Npta& a, const KripkeTree& t, int d) {
  if (a.mode() != TransitionMode::Tuple) throw std::invalid_argument("preimage search needs tuple mode");
  // For each node of t, the sets of states accepting some preimage of its subtree.
  std::vector<std::set<Info>> reach(t.size());
  auto accepting_states = [&](Letter c, const std::vector<const Info*>& kids) {
    Info v(a.size(), 0);
    for (std::size_t q = 0; q < a.size(); ++q)
      for (const auto& tup : a.transitions(static_cast<int>(q), c)) {
        if (tup.size() != kids.size()) continue;
        if (has_perfect_matching(static_cast<int>(kids.size()), [&](int j, int s) { return (*kids[j])[tup[s]] != 0; })) {
          v[q] = 1;
          break;
        }
      }
    return v;
  };
  for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
    Letter c = letter_of(t.valuation(v), a.sigma());
    const auto& kids = t.children(v);
    int k = static_cast<int>(kids.size());
    if (k == 0) {
      reach[v].insert(accepting_states(c, {}));
      continue;
    }
    // Candidate preimage children: (image child, info).
    std::vector<std::pair<int, const Info*>> options;
    for (int j = 0; j < k; ++j)
      for (const auto& info : reach[kids[j]]) options.emplace_back(j, &info);
    for (int size = k; size <= d; ++size)
      for_each_multiset(static_cast<int>(options.size()), size, [&](const std::vector<int>& pick) {
        std::vector<char> covered(k, 0);
        std::vector<const Info*> infos;
        for (int i : pick) {
          covered[options[i].first] = 1;
          infos.push_back(options[i].second);
        }
        if (std::all_of(covered.begin(), covered.end(), [](char b) { return b != 0; }))
          reach[v].insert(accepting_states(c, infos));
        return true;
      });
  }
  for (const auto& info : reach[0])
    if (info[a.initial()]) return true;
  return false;
}

}  // namespace modsep
