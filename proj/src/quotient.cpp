// Quotient and quotient-of-prefix automata.
//
// A state of the quotient automaton sits on a node v of a quotient tree and records the set R of
// states of the original automaton that the preimages of v are in. At v every q in R picks one of
// its transitions t and a surjective map from the slots of t onto v's children; the child j then
// collects the states of all slots mapped to j. On infinite trees every branch of the original run
// must be accepting, which is a universal condition on the R-annotated branches; it is checked with
// a breakpoint set O of traces that still owe a visit to an accepting priority.

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

#include "modsep/automata.hpp"
#include "modsep/matching.hpp"

namespace modsep {

namespace {

using StateSet = std::vector<int>;  // sorted, unique
struct ChildLabel {
  StateSet states;
  StateSet owing;
  auto operator<=>(const ChildLabel&) const = default;
};
using Partial = std::vector<ChildLabel>;

struct SlotChoice {
  StateTuple tuple;
  std::vector<char> owing;  // per slot
};

void insert_sorted(StateSet& s, int x) {
  auto it = std::lower_bound(s.begin(), s.end(), x);
  if (it == s.end() || *it != x) s.insert(it, x);
}

// All surjections from n slots onto k children, as vectors of child indices.
std::vector<std::vector<int>> surjections(int n, int k) {
  std::vector<std::vector<int>> out;
  if (k > n || k == 0) return out;
  std::vector<int> h(n, 0);
  while (true) {
    std::vector<char> hit(k, 0);
    for (int x : h) hit[x] = 1;
    if (std::all_of(hit.begin(), hit.end(), [](char b) { return b != 0; })) out.push_back(h);
    int i = n - 1;
    while (i >= 0 && h[i] == k - 1) h[i--] = 0;
    if (i < 0) break;
    ++h[i];
  }
  return out;
}

// Children labelings with k children reachable when every member picks one of its slot choices and
// a surjection onto the children. Partial labelings are kept sorted: later choices range over all
// surjections, so the reachable completions are closed under permuting the children.
std::set<Partial> distribute(const std::vector<std::vector<SlotChoice>>& members, int k, Budget& budget) {
  std::set<Partial> current{Partial(k)};
  std::map<int, std::vector<std::vector<int>>> surj_cache;
  for (const auto& choices : members) {
    std::set<Partial> next;
    for (const auto& choice : choices) {
      int n = static_cast<int>(choice.tuple.size());
      if (n < k) continue;
      auto [it, fresh] = surj_cache.emplace(n, std::vector<std::vector<int>>{});
      if (fresh) it->second = surjections(n, k);
      for (const auto& h : it->second)
        for (const auto& partial : current) {
          budget.charge();
          Partial p = partial;
          for (int s = 0; s < n; ++s) {
            insert_sorted(p[h[s]].states, choice.tuple[s]);
            if (choice.owing[s]) insert_sorted(p[h[s]].owing, choice.tuple[s]);
          }
          std::sort(p.begin(), p.end());
          next.insert(std::move(p));
        }
    }
    current = std::move(next);
    if (current.empty()) break;
  }
  return current;
}

std::string set_name(const StateSet& s, const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? " " : "") + names[s[i]];
  return out;
}

}  // namespace

Npta quotient_automaton(const Npta& a, Budget& budget) {
  if (a.mode() != TransitionMode::Tuple) throw std::invalid_argument("quotient automaton needs tuple mode");
  Npta out(a.sigma(), TransitionMode::Tuple, a.arity());
  if (a.size() == 0) return out;

  std::set<int> prios;
  for (std::size_t q = 0; q < a.size(); ++q) prios.insert(a.priority(static_cast<int>(q)));
  bool all_even = std::all_of(prios.begin(), prios.end(), [](int p) { return p % 2 == 0; });
  bool all_odd = std::all_of(prios.begin(), prios.end(), [](int p) { return p % 2 != 0; });
  bool buchi = prios.size() == 2 && *prios.begin() % 2 != 0 && *prios.rbegin() % 2 == 0;
  if (!all_even && !all_odd && !buchi)
    throw UnsupportedAutomaton("quotient automaton supports single-parity or Buchi-shaped priorities only");
  const bool safety = all_even;
  std::vector<char> accepting(a.size(), 0);
  for (std::size_t q = 0; q < a.size(); ++q) accepting[q] = a.priority(static_cast<int>(q)) % 2 == 0;

  std::vector<std::string> names;
  for (std::size_t q = 0; q < a.size(); ++q) names.push_back(a.name(static_cast<int>(q)));
  std::map<ChildLabel, int> id;
  std::vector<ChildLabel> labels;
  auto intern = [&](const ChildLabel& l) {
    auto [it, fresh] = id.emplace(l, 0);
    if (fresh) {
      std::string name = "{" + set_name(l.states, names);
      if (!safety) name += "|" + set_name(l.owing, names);
      name += "}";
      it->second = out.add_state(name, safety ? 0 : (l.owing.empty() ? 2 : 1));
      labels.push_back(l);
    }
    return it->second;
  };

  out.set_initial(intern(ChildLabel{{a.initial()}, {}}));
  for (std::size_t next = 0; next < labels.size(); ++next) {
    const ChildLabel label = labels[next];
    const int from = static_cast<int>(next);
    const auto& r = label.states;
    StateSet source = label.owing.empty() ? r : label.owing;
    for (Letter c = 0; c < a.letter_count(); ++c) {
      if (r.empty()) {
        for (int k = 0; k <= a.arity(); ++k) out.add_transition(from, c, StateTuple(k, from));
        continue;
      }
      bool leaf = std::all_of(r.begin(), r.end(), [&](int q) {
        const auto& list = a.transitions(q, c);
        return !list.empty() && list.front().empty();
      });
      if (leaf) out.add_transition(from, c, {});
      std::vector<std::vector<SlotChoice>> members;
      for (int q : r) {
        bool traced = !safety && std::binary_search(source.begin(), source.end(), q);
        std::vector<SlotChoice> choices;
        for (const auto& t : a.transitions(q, c)) {
          if (t.empty()) continue;
          SlotChoice ch{t, std::vector<char>(t.size(), 0)};
          if (traced)
            for (std::size_t s = 0; s < t.size(); ++s) ch.owing[s] = !accepting[t[s]];
          choices.push_back(std::move(ch));
        }
        members.push_back(std::move(choices));
      }
      for (int k = 1; k <= a.arity(); ++k)
        for (const auto& partial : distribute(members, k, budget)) {
          StateTuple t;
          for (const auto& child : partial) t.push_back(intern(child));
          budget.charge();
          out.add_transition(from, c, std::move(t));
        }
    }
  }
  return out;
}

FinTreeAutomaton qpl_automaton(const Npta& a, const Signature& sigma, Budget& budget) {
  if (a.mode() != TransitionMode::Tuple) throw std::invalid_argument("QPL automaton needs tuple mode");
  FinTreeAutomaton p = prefix_automaton(a, sigma);
  FinTreeAutomaton out;
  out.sigma = sigma;
  out.mode = TransitionMode::Tuple;
  out.arity = a.arity();
  if (p.empty()) return out;
  const std::size_t letters = p.letter_count();

  std::map<StateSet, int> id;
  std::vector<StateSet> sets;
  auto intern = [&](const StateSet& s) {
    auto [it, fresh] = id.emplace(s, 0);
    if (fresh) {
      it->second = static_cast<int>(sets.size());
      sets.push_back(s);
      out.names.push_back("{" + set_name(s, p.names) + "}");
      out.delta.emplace_back(letters);
      out.leaf_cut.emplace_back(letters, 1);
      out.leaf_real.emplace_back(letters, 1);
      for (Letter c = 0; c < letters; ++c)
        for (int q : s) {
          if (!p.leaf_cut[q][c]) out.leaf_cut.back()[c] = 0;
          if (!p.leaf_real[q][c]) out.leaf_real.back()[c] = 0;
        }
    }
    return it->second;
  };

  out.initial = intern({p.initial});
  for (std::size_t next = 0; next < sets.size(); ++next) {
    const StateSet r = sets[next];
    for (Letter c = 0; c < letters; ++c) {
      std::vector<std::vector<SlotChoice>> members;
      for (int q : r) {
        std::vector<SlotChoice> choices;
        for (const auto& t : p.delta[q][c]) choices.push_back({t, std::vector<char>(t.size(), 0)});
        members.push_back(std::move(choices));
      }
      for (int k = 1; k <= a.arity(); ++k)
        for (const auto& partial : distribute(members, k, budget)) {
          StateTuple t;
          for (const auto& child : partial) t.push_back(intern(child.states));
          std::sort(t.begin(), t.end());
          auto& list = out.delta[next][c];
          auto it = std::lower_bound(list.begin(), list.end(), t);
          if (it == list.end() || *it != t) list.insert(it, t);
        }
    }
  }
  return out;
}

bool qpl_member(const FinTreeAutomaton& prefix, const KripkeTree& t, int cut_depth) {
  if (prefix.empty()) return false;
  std::vector<std::vector<char>> win(t.size(), std::vector<char>(prefix.size(), 0));
  for (int v = static_cast<int>(t.size()) - 1; v >= 0; --v) {
    Letter c = letter_of(t.valuation(v), prefix.sigma);
    const auto& kids = t.children(v);
    bool cut = cut_depth < 0 ? kids.empty() : t.depth(v) >= cut_depth;
    for (std::size_t q = 0; q < prefix.size(); ++q) {
      if (cut || kids.empty()) {
        win[v][q] = cut ? prefix.leaf_cut[q][c] : prefix.leaf_real[q][c];
        continue;
      }
      for (const auto& tup : prefix.delta[q][c]) {
        int n = static_cast<int>(tup.size());
        int k = static_cast<int>(kids.size());
        if (n < k) continue;
        // Every slot goes to some child, every child receives a slot.
        std::vector<std::vector<int>> adj(k);
        bool ok = true;
        for (int s = 0; s < n && ok; ++s) {
          bool any = false;
          for (int j = 0; j < k; ++j)
            if (win[kids[j]][tup[s]]) {
              any = true;
              adj[j].push_back(s);
            }
          ok = any;
        }
        if (ok && max_matching(adj, n) == k) {
          win[v][q] = 1;
          break;
        }
      }
    }
  }
  return win[0][prefix.initial] != 0;
}

}  // namespace modsep
