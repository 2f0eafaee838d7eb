// Formula to nondeterministic automaton.
//
// A state is a pair (G, O): G is the set of subformula occurrences that must hold at the current
// node, O the subset whose traces have stayed inside a least-fixpoint cycle since the last
// breakpoint. At each node the automaton guesses Eve's choices (one disjunct per disjunction, the
// children receiving each diamond, the exceptions of each graded box) and sends the modal bodies to
// the children. Fixpoint cycles are homogeneous, so a trace is winning iff it does not stay forever
// in a mu-cycle; O is the usual breakpoint set for that co-Buchi style condition.

#include "modsep/translate.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "modsep/formula_graph.hpp"

namespace modsep {

namespace {

using EntrySet = std::vector<int>;  // sorted, unique

struct Label {
  EntrySet gamma;
  EntrySet owing;
  auto operator<=>(const Label&) const = default;
};

void insert_sorted(EntrySet& s, int x) {
  auto it = std::lower_bound(s.begin(), s.end(), x);
  if (it == s.end() || *it != x) s.insert(it, x);
}

struct Analysis {
  FormulaGraph fg;
  std::vector<int> scc;
  std::vector<char> in_mu;  // entry lies on a least-fixpoint cycle
  bool has_mu = false;
};

Analysis analyse(const Formula& normalized) {
  Analysis an;
  an.fg = FormulaGraph::build(normalized);
  const auto& fg = an.fg;
  const int n = static_cast<int>(fg.size());
  std::vector<std::vector<int>> succ(n);
  for (int e = 0; e < n; ++e) {
    succ[e] = fg.local_successors(e);
    if (fg[e].kind == Kind::Dia || fg[e].kind == Kind::Box) succ[e].push_back(fg[e].args[0]);
  }
  // Tarjan
  an.scc.assign(n, -1);
  std::vector<int> index(n, -1), low(n, 0), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0, components = 0;
  std::function<void(int)> visit = [&](int v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = 1;
    for (int w : succ[v]) {
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      while (true) {
        int w = stack.back();
        stack.pop_back();
        on_stack[w] = 0;
        an.scc[w] = components;
        if (w == v) break;
      }
      ++components;
    }
  };
  for (int e = 0; e < n; ++e)
    if (index[e] < 0) visit(e);

  std::vector<char> has_mu_var(components, 0), has_nu_var(components, 0);
  for (int e = 0; e < n; ++e)
    if (fg[e].kind == Kind::Var) {
      // A variable always lies on a cycle through its binder.
      if (fg[fg[e].binder].kind == Kind::Mu) has_mu_var[an.scc[e]] = 1;
      else has_nu_var[an.scc[e]] = 1;
    }
  for (int c = 0; c < components; ++c)
    if (has_mu_var[c] && has_nu_var[c])
      throw UnsupportedFormula("formula alternates least and greatest fixpoints on one cycle; not supported");
  an.in_mu.assign(n, 0);
  for (int e = 0; e < n; ++e) {
    an.in_mu[e] = has_mu_var[an.scc[e]];
    if (an.in_mu[e]) an.has_mu = true;
  }
  return an;
}

// Subsets of {0..k-1} of the given size, in lexicographic order.
void for_each_subset(int k, int size, const std::function<void(const std::vector<int>&)>& f) {
  if (size > k || size < 0) return;
  std::vector<int> pick(size);
  for (int i = 0; i < size; ++i) pick[i] = i;
  while (true) {
    f(pick);
    int i = size - 1;
    while (i >= 0 && pick[i] == k - size + i) --i;
    if (i < 0) return;
    ++pick[i];
    for (int j = i + 1; j < size; ++j) pick[j] = pick[j - 1] + 1;
  }
}

// All set partitions of {0..n-1}, as block index per element (restricted growth strings).
void for_each_partition(int n, const std::function<void(const std::vector<int>&, int)>& f) {
  std::vector<int> block(n, 0);
  std::function<void(int, int)> rec = [&](int i, int used) {
    if (i == n) {
      f(block, used);
      return;
    }
    for (int b = 0; b <= used; ++b) {
      block[i] = b;
      rec(i + 1, std::max(used, b + 1));
    }
  };
  rec(0, 0);
}

class Translator {
 public:
  Translator(const Formula& phi, int d, const Signature& alphabet, Budget& budget)
      : an_(analyse(phi)), fg_(an_.fg), d_(d), alphabet_(alphabet), budget_(budget),
        out_(alphabet, d < 0 ? TransitionMode::Set : TransitionMode::Tuple, d < 0 ? 0 : d) {
    prop_bit_.assign(fg_.size(), -1);
    for (std::size_t e = 0; e < fg_.size(); ++e)
      if (fg_[e].kind == Kind::Prop) {
        prop_bit_[e] = alphabet.index_of(fg_[e].name);
        if (prop_bit_[e] < 0) throw std::invalid_argument("alphabet misses proposition " + fg_[e].name);
      }
    if (d < 0)
      for (std::size_t e = 0; e < fg_.size(); ++e) {
        const auto& en = fg_[e];
        if ((en.kind == Kind::Dia && en.grade != 1) || (en.kind == Kind::Box && en.grade != 0))
          throw std::invalid_argument("graded formulas need a finite arity");
      }
  }

  Npta run() {
    out_.set_initial(intern(Label{{fg_.root}, {}}));
    for (std::size_t next = 0; next < labels_.size(); ++next) {
      const Label label = labels_[next];
      for (Letter c = 0; c < out_.letter_count(); ++c) {
        current_letter_ = c;
        expand(static_cast<int>(next), label, c);
      }
    }
    return std::move(out_);
  }

 private:
  struct Modal {
    int entry;
    bool owing;
  };

  int intern(const Label& l) {
    auto [it, fresh] = ids_.emplace(l, 0);
    if (fresh) {
      budget_.charge();
      int prio = an_.has_mu ? (l.owing.empty() ? 2 : 1) : 0;
      it->second = out_.add_state("s" + std::to_string(labels_.size()), prio);
      labels_.push_back(l);
    }
    return it->second;
  }

  // Local successors under the disjunct choice.
  std::vector<int> local(int e, const std::vector<int>& choice) const {
    if (fg_[e].kind == Kind::Or) return {choice[e]};
    return fg_.local_successors(e);
  }

  void expand(int from, const Label& label, Letter c) {
    std::vector<char> reached(fg_.size(), 0);
    std::vector<int> choice(fg_.size(), -1);
    std::vector<int> work;
    for (int e : label.gamma) {
      reached[e] = 1;
      work.push_back(e);
    }
    close(work, reached, choice, c, [&](const std::vector<char>& in, const std::vector<int>& ch) {
      step(from, label, in, ch);
    });
  }

  // Enumerates the local closures: one disjunct per reached disjunction, literals checked.
  void close(std::vector<int> work, std::vector<char> reached, std::vector<int> choice, Letter c,
             const std::function<void(const std::vector<char>&, const std::vector<int>&)>& done) {
    budget_.charge();
    while (!work.empty()) {
      int e = work.back();
      work.pop_back();
      const auto& en = fg_[e];
      switch (en.kind) {
        case Kind::False:
          return;
        case Kind::Prop: {
          bool holds = (c >> prop_bit_[e]) & 1u;
          if (holds == en.negated) return;
          break;
        }
        case Kind::Or:
          for (int a : en.args) {
            auto w = work;
            auto r = reached;
            auto ch = choice;
            ch[e] = a;
            if (!r[a]) {
              r[a] = 1;
              w.push_back(a);
            }
            close(std::move(w), std::move(r), std::move(ch), c, done);
          }
          return;
        default:
          for (int s : fg_.local_successors(e))
            if (!reached[s]) {
              reached[s] = 1;
              work.push_back(s);
            }
      }
    }
    done(reached, choice);
  }

  void step(int from, const Label& label, const std::vector<char>& in, const std::vector<int>& choice) {
    const int n = static_cast<int>(fg_.size());
    // A local cycle on a least-fixpoint loop is a play Eve loses.
    std::vector<int> color(n, 0);
    std::function<bool(int)> cyclic = [&](int e) {
      color[e] = 1;
      for (int s : local(e, choice)) {
        if (!in[s] || !an_.in_mu[s] || an_.scc[s] != an_.scc[e]) continue;
        if (color[s] == 1) return true;
        if (color[s] == 0 && cyclic(s)) return true;
      }
      color[e] = 2;
      return false;
    };
    for (int e = 0; e < n; ++e)
      if (in[e] && an_.in_mu[e] && color[e] == 0 && cyclic(e)) return;

    std::vector<char> owing(n, 0);
    std::vector<int> work;
    if (label.owing.empty()) {
      for (int e : label.gamma)
        if (an_.in_mu[e]) work.push_back(e);
    } else {
      work = label.owing;
    }
    for (int e : work) owing[e] = 1;
    while (!work.empty()) {
      int e = work.back();
      work.pop_back();
      for (int s : local(e, choice))
        if (in[s] && !owing[s] && an_.scc[s] == an_.scc[e]) {
          owing[s] = 1;
          work.push_back(s);
        }
    }

    std::vector<Modal> boxes, graded_boxes, diamonds;
    for (int e = 0; e < n; ++e) {
      if (!in[e]) continue;
      const auto& en = fg_[e];
      if (en.kind != Kind::Dia && en.kind != Kind::Box) continue;
      Modal m{e, owing[e] && an_.scc[en.args[0]] == an_.scc[e]};
      if (en.kind == Kind::Dia) diamonds.push_back(m);
      else if (en.grade == 0) boxes.push_back(m);
      else graded_boxes.push_back(m);
    }
    if (d_ < 0) distribute_sets(from, boxes, diamonds);
    else distribute_tuples(from, boxes, graded_boxes, diamonds);
  }

  static void add_body(Label& child, int body, bool owing) {
    insert_sorted(child.gamma, body);
    if (owing) insert_sorted(child.owing, body);
  }

  void distribute_tuples(int from, const std::vector<Modal>& boxes, const std::vector<Modal>& graded_boxes,
                         const std::vector<Modal>& diamonds) {
    for (int k = 0; k <= d_; ++k) {
      Label base;
      for (const auto& m : boxes) add_body(base, fg_[m.entry].args[0], m.owing);
      std::set<std::vector<Label>> partials{std::vector<Label>(k, base)};
      auto apply = [&](const Modal& m, bool diamond) {
        const auto& en = fg_[m.entry];
        int body = en.args[0];
        std::set<std::vector<Label>> next;
        for (const auto& p : partials) {
          if (diamond) {
            for_each_subset(k, en.grade, [&](const std::vector<int>& pick) {
              auto q = p;
              for (int j : pick) add_body(q[j], body, m.owing);
              std::sort(q.begin(), q.end());
              budget_.charge();
              next.insert(std::move(q));
            });
          } else {
            int exceptions = std::min(en.grade, k);
            for_each_subset(k, exceptions, [&](const std::vector<int>& pick) {
              auto q = p;
              std::size_t i = 0;
              for (int j = 0; j < k; ++j) {
                if (i < pick.size() && pick[i] == j) {
                  ++i;
                  continue;
                }
                add_body(q[j], body, m.owing);
              }
              std::sort(q.begin(), q.end());
              budget_.charge();
              next.insert(std::move(q));
            });
          }
        }
        partials = std::move(next);
      };
      for (const auto& m : graded_boxes) apply(m, false);
      for (const auto& m : diamonds) apply(m, true);
      for (const auto& p : partials) emit(from, p);
    }
  }

  void distribute_sets(int from, const std::vector<Modal>& boxes, const std::vector<Modal>& diamonds) {
    Label base;
    for (const auto& m : boxes) add_body(base, fg_[m.entry].args[0], m.owing);
    if (diamonds.empty()) {
      emit(from, {});
      emit(from, {base});
      return;
    }
    for_each_partition(static_cast<int>(diamonds.size()), [&](const std::vector<int>& block, int blocks) {
      std::vector<Label> kids(blocks, base);
      for (std::size_t i = 0; i < diamonds.size(); ++i)
        add_body(kids[block[i]], fg_[diamonds[i].entry].args[0], diamonds[i].owing);
      emit(from, kids);
      kids.push_back(base);
      emit(from, kids);
    });
  }

  void emit(int from, const std::vector<Label>& kids) {
    StateTuple t;
    for (const auto& l : kids) t.push_back(intern(l));
    budget_.charge();
    out_.add_transition(from, current_letter_, std::move(t));
  }

  Analysis an_;
  const FormulaGraph& fg_;
  int d_;
  Signature alphabet_;
  Budget& budget_;
  Npta out_;
  std::vector<int> prop_bit_;
  std::map<Label, int> ids_;
  std::vector<Label> labels_;
  Letter current_letter_ = 0;
};

}  // namespace

Npta muml_to_npta(const Formula& phi, int d, const Signature& alphabet, Budget& budget) {
  Formula f = is_normalized(phi) ? phi : normalize(phi);
  if (!signature_of(f).subset_of(alphabet)) throw std::invalid_argument("alphabet misses propositions of the formula");
  Translator t(f, d, alphabet, budget);
  return t.run();
}

Npta muml_to_npta(const Formula& phi, int d, Budget& budget) {
  return muml_to_npta(phi, d, signature_of(phi), budget);
}

bool translatable(const Formula& phi) {
  try {
    analyse(is_normalized(phi) ? phi : normalize(phi));
    return true;
  } catch (const UnsupportedFormula&) {
    return false;
  }
}

}  // namespace modsep
