#include "modsep/construct.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

#include "modsep/kripke.hpp"
#include "modsep/translate.hpp"
#include "modsep/types.hpp"

namespace modsep {

namespace {

Formula finite_trees() { return Formula::mu("Xfin", Formula::box(Formula::var("Xfin"))); }

int automaton_degree(const Formula& phi, const ModelClass& c) {
  if (c.degree() >= 0) return c.degree();
  return is_graded(phi) ? witness_degree(phi) : kUnbounded;
}

// Models of a modal formula have height <= its depth, so the type table decides satisfiability
// directly and hands back a model. nullopt when phi has fixpoints or too many propositions.
std::optional<std::optional<KripkeTree>> modal_model(const Formula& phi, const ModelClass& c, Budget& budget) {
  if (!is_modal_logic(phi) || signature_of(phi).size() > 16) return std::nullopt;
  Formula f = normalize(phi);
  auto types = realized_types(f, Signature{}, modal_depth(f), c.degree(), budget);
  if (types.empty()) return std::optional<KripkeTree>{};
  return std::optional<KripkeTree>{types.begin()->second};
}

}  // namespace

Npta class_automaton(const Formula& phi, const ModelClass& c, Budget& budget) {
  Formula f = c.finite_only() ? Formula::conj(phi, finite_trees()) : phi;
  f = normalize(f);
  return muml_to_npta(f, automaton_degree(f, c), budget);
}

bool satisfiable(const Formula& phi, const ModelClass& c, Budget& budget) {
  if (auto m = modal_model(phi, c, budget)) return m->has_value();
  return !is_empty(class_automaton(phi, c, budget));
}

bool entails(const Formula& phi, const Formula& psi, const ModelClass& c, Budget& budget) {
  return !satisfiable(Formula::conj(phi, Formula::neg(psi)), c, budget);
}

// ---------------------------------------------------------------------------
// Words

Formula uniform_consequence_words(const Npta& a, int n, const Signature& sigma) {
  if (a.mode() != TransitionMode::Tuple || a.arity() != 1) throw std::invalid_argument("word automata have arity 1");
  if (n < 0) throw std::invalid_argument("negative depth");
  FinTreeAutomaton p = prefix_automaton(a, sigma);
  if (p.empty()) return Formula::bottom();
  const int states = static_cast<int>(p.size());
  const Letter letters = static_cast<Letter>(p.letter_count());

  auto letters_where = [&](auto&& pred) {
    std::vector<Formula> out;
    for (Letter c = 0; c < letters; ++c)
      if (pred(c)) out.push_back(letter_formula(c, sigma));
    return Formula::disj(std::move(out));
  };

  // run[m][p][q]: the next m letters lead from p to q.
  std::map<int, std::vector<std::vector<Formula>>> run;
  std::function<const std::vector<std::vector<Formula>>&(int)> segment = [&](int m) -> const auto& {
    auto it = run.find(m);
    if (it != run.end()) return it->second;
    std::vector<std::vector<Formula>> table(states, std::vector<Formula>(states));
    for (int from = 0; from < states; ++from)
      for (int to = 0; to < states; ++to) {
        if (m == 0) {
          table[from][to] = from == to ? Formula::top() : Formula::bottom();
        } else if (m == 1) {
          table[from][to] = letters_where([&](Letter c) {
            const auto& ts = p.delta[from][c];
            return std::find(ts.begin(), ts.end(), StateTuple{to}) != ts.end();
          });
        }
      }
    if (m >= 2) {
      const int half = m / 2;
      const auto& first = segment(half);
      const auto& second = segment(m - half);
      for (int from = 0; from < states; ++from)
        for (int to = 0; to < states; ++to) {
          std::vector<Formula> parts;
          for (int mid = 0; mid < states; ++mid)
            parts.push_back(Formula::conj(first[from][mid], Formula::dia_power(second[mid][to], half)));
          table[from][to] = simplify(Formula::disj(std::move(parts)));
        }
    } else {
      for (auto& row : table)
        for (auto& f : row) f = simplify(f);
    }
    return run.emplace(m, std::move(table)).first->second;
  };

  std::vector<Formula> ends;
  for (int m = 0; m <= n; ++m) {
    const auto& reach = segment(m);
    for (int q = 0; q < states; ++q) {
      Formula tail = m < n ? Formula::conj(letters_where([&](Letter c) { return p.leaf_real[q][c] != 0; }),
                                           Formula::box(Formula::bottom()))
                           : letters_where([&](Letter c) { return p.leaf_cut[q][c] != 0; });
      ends.push_back(Formula::conj(reach[p.initial][q], Formula::dia_power(tail, m)));
    }
  }
  return simplify(Formula::disj(std::move(ends)));
}

Formula uniform_consequence_words(const Npta& a, int n) { return uniform_consequence_words(a, n, a.sigma()); }

// ---------------------------------------------------------------------------
// Trees

Formula uniform_consequence(const Npta& a, int n, const ModelClass& c, const Signature& sigma) {
  if (n < 0) throw std::invalid_argument("negative depth");
  if (c.finite_only()) throw std::invalid_argument("uniform consequences are built for all models or binary trees");
  if (c.kind() == ModelClass::Kind::Binary) {
    if (a.mode() != TransitionMode::Tuple || a.arity() > 2) throw std::invalid_argument("binary class needs arity <= 2");
    if (!is_duplication_safe(a)) throw std::invalid_argument("binary uniform consequence needs a duplication-safe automaton");
  } else if (c.kind() != ModelClass::Kind::All) {
    throw std::invalid_argument("uniform consequences are built for all models or binary trees");
  }
  FinTreeAutomaton p = prefix_automaton(a, sigma);
  if (p.empty()) return Formula::bottom();
  const int states = static_cast<int>(p.size());
  const Letter letters = static_cast<Letter>(p.letter_count());

  std::vector<Formula> level(states);
  for (int q = 0; q < states; ++q) {
    std::vector<Formula> opts;
    for (Letter ch = 0; ch < letters; ++ch)
      if (p.leaf_cut[q][ch]) opts.push_back(letter_formula(ch, sigma));
    level[q] = simplify(Formula::disj(std::move(opts)));
  }
  for (int m = 0; m < n; ++m) {
    std::vector<Formula> next(states);
    for (int q = 0; q < states; ++q) {
      std::vector<Formula> opts;
      for (Letter ch = 0; ch < letters; ++ch) {
        Formula letter = letter_formula(ch, sigma);
        if (p.leaf_real[q][ch]) opts.push_back(Formula::conj(letter, Formula::box(Formula::bottom())));
        for (const auto& t : p.delta[q][ch]) {
          std::vector<Formula> kids;
          for (int s : t) kids.push_back(level[s]);
          opts.push_back(Formula::conj(letter, Formula::nabla(kids)));
        }
      }
      next[q] = simplify(Formula::disj(std::move(opts)));
    }
    level = std::move(next);
  }
  return level[p.initial];
}

Formula uniform_consequence(const Npta& a, int n, const ModelClass& c) {
  return uniform_consequence(a, n, c, a.sigma());
}

// ---------------------------------------------------------------------------
// Verification

SeparatorCheck verify_separator(const Formula& phi, const Formula& phi2, const Formula& psi, const ModelClass& c,
                                Budget& budget) {
  SeparatorCheck out;
  const int depth = modal_depth(psi) + 1;
  auto left_model = modal_model(Formula::conj(phi, Formula::neg(psi)), c, budget);
  auto right_model = modal_model(Formula::conj(psi, phi2), c, budget);
  if (left_model && right_model) {
    out.left_ok = !left_model->has_value();
    out.right_ok = !right_model->has_value();
    out.countermodel = out.left_ok ? *right_model : *left_model;
    return out;
  }
  Npta left = class_automaton(Formula::conj(phi, Formula::neg(psi)), c, budget);
  out.left_ok = is_empty(left);
  if (!out.left_ok) out.countermodel = witness_prefix(left, depth);
  Npta right = class_automaton(Formula::conj(psi, phi2), c, budget);
  out.right_ok = is_empty(right);
  if (!out.right_ok && !out.countermodel) out.countermodel = witness_prefix(right, depth);
  return out;
}

// ---------------------------------------------------------------------------
// Type disjunctions

std::optional<Formula> separator_td(const Formula& phi, const Formula& phi2, int d, const Signature& sigma, int n,
                                    Budget& budget) {
  if (d < 1 || n < 0) throw std::invalid_argument("separator_td needs d >= 1 and n >= 0");
  Formula f = normalize(phi);
  Npta a = muml_to_npta(f, d, signature_of(f).unite(sigma), budget);
  FinTreeAutomaton p = prefix_automaton(a, sigma);
  std::vector<Formula> types;
  for_each_tree(sigma, d, n, [&](const KripkeTree& t) {
    budget.charge(t.size());
    if (quotient(t, sigma, n).size() != t.size()) return true;
    if (qpl_member(p, t, n)) types.push_back(characteristic_formula(t, sigma, n));
    return true;
  });
  Formula psi = simplify(Formula::disj(std::move(types)));
  if (!verify_separator(phi, phi2, psi, ModelClass::dary(d), budget).holds()) return std::nullopt;
  return psi;
}

Formula ml_craig_interpolant(const Formula& theta, const Formula& theta2, const Signature& sigma, int d,
                             Budget& budget) {
  if (!is_modal_logic(theta) || !is_modal_logic(theta2)) throw std::invalid_argument("interpolants are built for modal formulas");
  const int n = std::max(modal_depth(theta), modal_depth(theta2));
  auto mine = realized_types(normalize(theta), sigma, n, d, budget);
  auto theirs = realized_types(normalize(theta2), sigma, n, d, budget);
  std::vector<Formula> parts;
  for (const auto& [key, model] : mine) {
    if (theirs.count(key)) throw std::domain_error("the formulas share a " + sigma.to_string() + "-type");
    parts.push_back(characteristic_formula(model, sigma, n));
  }
  return simplify(Formula::disj(std::move(parts)));
}

}  // namespace modsep
