#include "modsep/decide.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

#include "modsep/construct.hpp"
#include "modsep/translate.hpp"
#include "modsep/types.hpp"

namespace modsep {

namespace {

// Depth at which negative verdicts are illustrated by a witness pair.
constexpr int kProbeDepth = 3;

struct Chain {
  Npta left;
  Npta right;
  FinTreeAutomaton left_prefix;
  FinTreeAutomaton right_prefix;
  ConsistencyReport report;
  LiftMode lift = LiftMode::Isomorphic;
};

Chain run_chain(Npta a, Npta a2, const Signature& sigma, bool qpl, Budget& budget) {
  Chain c{std::move(a), std::move(a2), {}, {}, {}, qpl ? LiftMode::Preimage : LiftMode::Isomorphic};
  c.left_prefix = qpl ? qpl_automaton(c.left, sigma, budget) : prefix_automaton(c.left, sigma);
  c.right_prefix = qpl ? qpl_automaton(c.right, sigma, budget) : prefix_automaton(c.right, sigma);
  const int bound = qpl ? static_cast<int>(c.left_prefix.size() * c.right_prefix.size()) + 1
                        : static_cast<int>(c.left.size() * c.right.size()) + 1;
  c.report = tallness_chain(c.left_prefix, c.right_prefix, bound, budget);
  return c;
}

void record(Verdict& v, const Chain& c, int degree) {
  v.trace.degree = degree;
  v.trace.bound = c.report.bound;
  v.trace.depth_bound = c.report.first_failure;
  v.trace.stabilized_at = c.report.stabilized_at;
  v.trace.product_size = c.report.product_size;
}

void attach_evidence(Verdict& v, const Chain& c, const Signature& sigma) {
  const int n = std::min(c.report.bound, kProbeDepth);
  auto common = common_prefix(c.left_prefix, c.right_prefix, c.report, n);
  if (!common) {
    v.trace.notes.push_back("no common prefix extracted at depth " + std::to_string(n));
    return;
  }
  auto left = lift_prefix(c.left, *common, sigma, n, c.lift);
  auto right = lift_prefix(c.right, *common, sigma, n, c.lift);
  if (!left || !right || !check_bisim(*left, *right, sigma, n)) {
    v.trace.notes.push_back("witness lifting failed at depth " + std::to_string(n));
    return;
  }
  v.evidence = Evidence{n, sigma, *left, *right};
}

void set_label(Verdict& v, const std::string& yes, const std::string& no) { v.label = v.decision ? yes : no; }

void attach_separator(Verdict& v, const Formula& phi, const Formula& phi2, Formula psi, const ModelClass& c,
                      Budget& budget) {
  auto check = verify_separator(phi, phi2, psi, c, budget);
  v.separator = std::move(psi);
  v.verified = check.holds();
  if (!v.verified) v.trace.notes.push_back("constructed separator failed verification");
}

// Unsatisfiable sides are separated by a constant.
bool trivial_case(Verdict& v, const Formula& phi, const Formula& phi2, const Npta& a, const Npta& a2,
                  const ModelClass& c, Budget& budget) {
  const bool left_empty = is_empty(a), right_empty = is_empty(a2);
  if (!left_empty && !right_empty) return false;
  v.decision = true;
  v.trace.depth_bound = 0;
  v.trace.notes.push_back(left_empty ? "left formula unsatisfiable" : "right formula unsatisfiable");
  attach_separator(v, phi, phi2, left_empty ? Formula::bottom() : Formula::top(), c, budget);
  return true;
}

Signature default_sigma(const Formula& phi, const Formula& phi2, const std::optional<Signature>& sigma) {
  return sigma ? *sigma : signature_of(phi).unite(signature_of(phi2));
}

std::string show(bool b) { return b ? "yes" : "no"; }

}  // namespace

WordConsistency word_consistency(const Npta& a, const Npta& a2, const Signature& sigma) {
  if (a.mode() != TransitionMode::Tuple || a.arity() != 1 || a2.mode() != TransitionMode::Tuple || a2.arity() != 1)
    throw std::invalid_argument("word consistency needs arity 1");
  WordConsistency out;
  FinTreeAutomaton p = prefix_automaton(a, sigma), p2 = prefix_automaton(a2, sigma);
  if (p.empty() || p2.empty()) {
    out.first_failure = 0;
    return out;
  }
  const int n2 = static_cast<int>(p2.size());
  const Letter letters = static_cast<Letter>(p.letter_count());
  auto shares = [&](int x, int y, const std::vector<std::vector<char>>& l, const std::vector<std::vector<char>>& r) {
    for (Letter c = 0; c < letters; ++c)
      if (l[x][c] && r[y][c]) return true;
    return false;
  };
  auto successors = [&](int x, int y) {
    std::vector<int> out;
    for (Letter c = 0; c < letters; ++c)
      for (const auto& t : p.delta[x][c])
        for (const auto& t2 : p2.delta[y][c]) out.push_back(t[0] * n2 + t2[0]);
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  };
  const int start = p.initial * n2 + p2.initial;
  if (!shares(p.initial, p2.initial, p.leaf_cut, p2.leaf_cut)) {
    out.first_failure = 0;
    return out;
  }
  // Longest path from each pair; a cycle or a common word end makes it unbounded.
  const int total = static_cast<int>(p.size()) * n2;
  std::vector<int> state(total, 0);  // 0 new, 1 on stack, 2 done
  std::vector<int> longest(total, 0);
  constexpr int kInfinite = -1, kNone = -2;
  std::function<int(int)> visit = [&](int v) -> int {
    if (state[v] == 1) return kInfinite;
    if (state[v] == 2) return longest[v];
    state[v] = 1;
    // A pair with a successor shares a cut letter; a pair without one may not.
    int best = shares(v / n2, v % n2, p.leaf_cut, p2.leaf_cut) ? 0 : kNone;
    if (shares(v / n2, v % n2, p.leaf_real, p2.leaf_real)) best = kInfinite;
    for (int w : successors(v / n2, v % n2)) {
      if (best == kInfinite) break;
      int sub = visit(w);
      if (sub == kInfinite) best = kInfinite;
      else if (sub != kNone) best = std::max(best, sub + 1);
    }
    state[v] = 2;
    longest[v] = best;
    return best;
  };
  int reach = visit(start);
  out.all_n = reach == kInfinite;
  out.first_failure = out.all_n ? -1 : reach + 1;
  return out;
}

Verdict decide_separability(const Formula& phi, const Formula& phi2, const ModelClass& c,
                            const std::optional<Signature>& sigma_opt, Budget& budget) {
  if (is_graded(phi) || is_graded(phi2)) throw std::invalid_argument("graded formulas go through the graded procedures");
  Formula f = normalize(phi), f2 = normalize(phi2);
  const Signature sigma = default_sigma(f, f2, sigma_opt);
  ModelClass base = c;
  Verdict v;
  if (c.finite_only()) {
    std::tie(f, f2) = reduce_finite_trees(f, f2);
    base = c.inner();
    v.trace.notes.push_back("finite trees: both sides conjoined with mu X.[]X, decided over " + base.to_string());
  }
  v.trace.notes.push_back("sigma = " + sigma.to_string());
  auto finish = [&](const Chain& chain, int degree) {
    record(v, chain, degree);
    v.decision = !chain.report.all_n;
  };

  switch (base.base_kind()) {
    case ModelClass::Kind::All: {
      Npta a = muml_to_npta(f, kUnbounded, budget), a2 = muml_to_npta(f2, kUnbounded, budget);
      v.trace.degree = kUnbounded;
      if (trivial_case(v, phi, phi2, a, a2, c, budget)) break;
      Chain chain = run_chain(a, a2, sigma, false, budget);
      finish(chain, kUnbounded);
      if (v.decision)
        attach_separator(v, f, f2, uniform_consequence(a, chain.report.first_failure, ModelClass::all(), sigma), base,
                         budget);
      else
        attach_evidence(v, chain, sigma);
      break;
    }
    case ModelClass::Kind::Words: {
      Npta a = muml_to_npta(f, 1, budget), a2 = muml_to_npta(f2, 1, budget);
      v.trace.degree = 1;
      if (trivial_case(v, phi, phi2, a, a2, c, budget)) break;
      WordConsistency words = word_consistency(a, a2, sigma);
      Chain chain = run_chain(a, a2, sigma, false, budget);
      finish(chain, 1);
      if (words.all_n != chain.report.all_n || words.first_failure != chain.report.first_failure)
        throw std::logic_error("word product and tallness chain disagree");
      if (v.decision)
        attach_separator(v, f, f2, uniform_consequence_words(a, words.first_failure, sigma), base, budget);
      else
        attach_evidence(v, chain, sigma);
      break;
    }
    case ModelClass::Kind::Binary: {
      Npta a = duplication_safe_closure(muml_to_npta(f, 2, budget));
      Npta a2 = duplication_safe_closure(muml_to_npta(f2, 2, budget));
      v.trace.degree = 2;
      if (trivial_case(v, phi, phi2, a, a2, c, budget)) break;
      Chain chain = run_chain(a, a2, sigma, false, budget);
      finish(chain, 2);
      if (v.decision)
        attach_separator(v, f, f2, uniform_consequence(a, chain.report.first_failure, ModelClass::binary(), sigma),
                         base, budget);
      else
        attach_evidence(v, chain, sigma);
      break;
    }
    case ModelClass::Kind::Dary: {
      const int d = base.degree();
      Npta a = muml_to_npta(f, d, budget), a2 = muml_to_npta(f2, d, budget);
      v.trace.degree = d;
      if (trivial_case(v, phi, phi2, a, a2, c, budget)) break;
      Chain chain = run_chain(a, a2, sigma, true, budget);
      finish(chain, d);
      if (v.decision) {
        auto psi = separator_td(f, f2, d, sigma, chain.report.first_failure, budget);
        if (psi) {
          v.separator = *psi;
          v.verified = true;
        } else {
          v.trace.notes.push_back("type disjunction at the failure depth does not separate");
        }
      } else {
        attach_evidence(v, chain, sigma);
      }
      break;
    }
    default:
      throw std::invalid_argument("unsupported class");
  }
  set_label(v, "SEPARABLE", "NOT_SEPARABLE");
  return v;
}

Verdict decide_definability(const Formula& phi, const ModelClass& c, Budget& budget) {
  if (is_graded(phi)) throw std::invalid_argument("graded formulas go through decide_mu_definability_graded");
  Formula f = normalize(phi);
  Verdict v = decide_separability(f, normalize(Formula::neg(f)), c, signature_of(f), budget);
  set_label(v, "DEFINABLE", "NOT_DEFINABLE");
  return v;
}

Verdict decide_interpolant_existence(const Formula& phi, const Formula& phi2, int d, Budget& budget) {
  if (!is_modal_logic(phi) || !is_modal_logic(phi2)) throw std::invalid_argument("interpolant existence needs modal formulas");
  if (d == 0 || d < kUnbounded) throw std::invalid_argument("outdegree bound must be positive");
  Formula f = normalize(phi), g = normalize(Formula::neg(phi2));
  const Signature sigma = signature_of(f).intersect(signature_of(g));
  const int n = std::max(modal_depth(f), modal_depth(g));
  Verdict v;
  v.trace.degree = d;
  v.trace.depth_bound = n;
  v.trace.notes.push_back("sigma = " + sigma.to_string());
  auto mine = realized_types(f, sigma, n, d, budget);
  auto theirs = realized_types(g, sigma, n, d, budget);
  v.trace.notes.push_back("types: " + std::to_string(mine.size()) + " left, " + std::to_string(theirs.size()) + " right");
  v.decision = true;
  for (const auto& [key, model] : mine) {
    auto it = theirs.find(key);
    if (it == theirs.end()) continue;
    v.decision = false;
    if (check_bisim(model, it->second, sigma, n)) v.evidence = Evidence{n, sigma, model, it->second};
    else v.trace.notes.push_back("shared type failed the bisimulation check");
    break;
  }
  if (v.decision) attach_separator(v, f, g, ml_craig_interpolant(f, g, sigma, d, budget),
                                 d == kUnbounded ? ModelClass::all() : ModelClass::dary(d), budget);
  set_label(v, "INTERPOLABLE", "NOT_INTERPOLABLE");
  return v;
}

Verdict decide_graded_separability(const Formula& phi, const Formula& phi2, bool graded_separator, Budget& budget) {
  Formula f = normalize(phi), f2 = normalize(phi2);
  const Signature sigma = signature_of(f).unite(signature_of(f2));
  const int d = witness_degree(f) + witness_degree(f2);
  const int size_bound = std::max(max_grade(f), max_grade(f2)) *
                         static_cast<int>(formula_size(f) + formula_size(f2));
  Verdict v;
  v.trace.notes.push_back("sigma = " + sigma.to_string());
  v.trace.notes.push_back("separator logic: " + std::string(graded_separator ? "graded modal" : "modal"));
  v.trace.notes.push_back("outdegree " + std::to_string(d) + " (grade x size bound " + std::to_string(size_bound) + ")");
  Npta a = muml_to_npta(f, d, budget), a2 = muml_to_npta(f2, d, budget);
  if (trivial_case(v, f, f2, a, a2, ModelClass::all(), budget)) {
    v.trace.degree = d;
    set_label(v, "SEPARABLE", "NOT_SEPARABLE");
    return v;
  }
  Chain chain = run_chain(a, a2, sigma, !graded_separator, budget);
  record(v, chain, d);
  v.decision = !chain.report.all_n;
  if (!v.decision) {
    attach_evidence(v, chain, sigma);
  } else {
    // Either input may already be a separator.
    for (const Formula& candidate : {f, normalize(Formula::neg(f2))}) {
      if (!is_modal_logic(candidate) || (!graded_separator && is_graded(candidate))) continue;
      if (verify_separator(f, f2, candidate, ModelClass::all(), budget).holds()) {
        v.separator = candidate;
        v.verified = true;
        break;
      }
    }
    if (!v.separator && !graded_separator) {
      auto psi = separator_td(f, f2, d, sigma, chain.report.first_failure, budget);
      if (psi && verify_separator(f, f2, *psi, ModelClass::all(), budget).holds()) {
        v.separator = *psi;
        v.verified = true;
      }
    }
    if (!v.separator) v.trace.notes.push_back("no separator constructed");
  }
  set_label(v, "SEPARABLE", "NOT_SEPARABLE");
  return v;
}

GradedDefinability decide_mu_definability_graded(const Formula& phi, Budget& budget) {
  Formula f = normalize(phi);
  Formula flat = normalize(flatten(f));
  Formula extra = normalize(Formula::conj(f, Formula::neg(flat)));
  Formula missing = normalize(Formula::conj(Formula::neg(f), flat));
  const int d = std::max(witness_degree(extra), witness_degree(missing));
  GradedDefinability out;
  Verdict& v = out.mu;
  v.trace.degree = d;
  v.trace.notes.push_back("flattening: " + to_string(flat));
  const int depth = std::max(modal_depth(f), 1) + 1;
  Npta over = muml_to_npta(extra, d, budget);
  Npta under = muml_to_npta(missing, d, budget);
  v.decision = is_empty(over) && is_empty(under);
  if (v.decision) {
    v.separator = flat;
    v.verified = true;
  } else {
    v.counterexample = witness_prefix(is_empty(over) ? under : over, depth);
  }
  set_label(v, "MU_DEFINABLE", "NOT_MU_DEFINABLE");
  if (v.decision) {
    out.ml = decide_definability(flat, ModelClass::all(), budget);
    v.trace.notes.push_back("modal definability: " + show(out.ml->decision));
  }
  return out;
}

std::pair<Formula, Formula> reduce_finite_trees(const Formula& phi, const Formula& phi2) {
  Formula finite = Formula::mu("Xfin", Formula::box(Formula::var("Xfin")));
  return {normalize(Formula::conj(phi, finite)), normalize(Formula::conj(phi2, finite))};
}

Verdict decide_craig_separability(const Formula& phi, const Formula& phi2, const ModelClass& c, Budget& budget) {
  if (c.base_kind() == ModelClass::Kind::Dary)
    throw std::invalid_argument("Craig separability coincides with separability only for all, words and binary");
  const Signature common = signature_of(phi).intersect(signature_of(phi2));
  Verdict full = decide_separability(phi, phi2, c, std::nullopt, budget);
  Verdict v = decide_separability(phi, phi2, c, common, budget);
  if (v.decision != full.decision) throw std::logic_error("Craig separability differs from separability");
  v.trace.notes.push_back("common signature " + common.to_string());
  set_label(v, "CRAIG_SEPARABLE", "NOT_CRAIG_SEPARABLE");
  return v;
}

}  // namespace modsep
