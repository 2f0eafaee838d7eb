// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <map>
#include <sstream>

#include "concordance.hpp"
#include "modsep/construct.hpp"
#include "modsep/decide.hpp"
#include "modsep/games.hpp"
#include "modsep/oracle.hpp"
#include "modsep/translate.hpp"
#include "support.hpp"

using namespace modsep;
using namespace modsep::testing;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

Formula f(const char* text) { return normalize(parse_formula(text)); }

// Collects failures of one criterion.
class Report {
 public:
  void expect(bool ok, const std::string& what) {
    ++checks_;
    if (!ok && failures_.size() < 5) failures_.push_back(what);
    if (!ok) ++failed_;
  }
  bool ok() const { return failed_ == 0; }
  std::string summary() const {
    std::ostringstream out;
    out << checks_ << " checks";
    if (failed_ > 0) {
      out << ", " << failed_ << " failed:";
      for (const auto& s : failures_) out << " [" << s << "]";
    }
    return out.str();
  }

 private:
  int checks_ = 0;
  int failed_ = 0;
  std::vector<std::string> failures_;
};

bool print(int id, const std::string& name, const Report& r, const std::string& extra = "") {
  std::cout << (r.ok() ? "PASS" : "FAIL") << " criterion " << id << " (" << name << "): " << r.summary();
  if (!extra.empty()) std::cout << "; " << extra;
  std::cout << std::endl;
  return r.ok();
}

bool separates_on_trees(const Formula& phi, const Formula& phi2, const Formula& psi, int d) {
  for (const auto& t : enumerate_trees(signature_of(phi).unite(signature_of(phi2)), d, 2, 20000)) {
    if (model_check(t, phi) && !fixpoint_eval(t, psi)) return false;
    if (model_check(t, phi2) && fixpoint_eval(t, psi)) return false;
  }
  return true;
}

// ---------------------------------------------------------------------------

bool criterion_instances() {
  Report r;
  const Formula inf = normalize(theta_inf()), leaf = f("[]false"), finite = f("mu X. []X");
  const Formula left = f("<>(a & b) & <>(a & ~b)"), right = f("<>(~a & c) & <>(~a & ~c)");
  double slowest = 0;
  auto timed = [&](const std::string& name, const std::function<bool()>& body) {
    auto start = Clock::now();
    bool ok = body();
    double t = seconds_since(start);
    slowest = std::max(slowest, t);
    r.expect(ok, name);
    r.expect(t <= 60.0, name + " took " + std::to_string(t) + " s");
  };
  for (ModelClass c : {ModelClass::all(), ModelClass::words(), ModelClass::binary()})
    timed("theta_inf vs leaf over " + c.to_string(), [&] {
      Verdict v = decide_separability(inf, leaf, c);
      return v.decision && v.separator && v.verified && verify_separator(inf, leaf, *v.separator, c).holds() &&
             separates_on_trees(inf, leaf, *v.separator, std::max(c.degree(), 2));
    });
  timed("theta_inf vs finite over all", [&] {
    Verdict v = decide_separability(inf, finite, ModelClass::all());
    return !v.decision && v.evidence &&
           check_bisim(v.evidence->left, v.evidence->right, v.evidence->sigma, v.evidence->n).has_value();
  });
  const Formula consequent = normalize(Formula::neg(right));
  timed("no interpolant over T3", [&] {
    Verdict v = decide_interpolant_existence(left, consequent, 3);
    return !v.decision && v.evidence && model_check(v.evidence->left, left) && model_check(v.evidence->right, right) &&
           check_bisim(v.evidence->left, v.evidence->right, Signature{"a"}, v.evidence->n).has_value();
  });
  timed("interpolant over T2", [&] {
    Verdict v = decide_interpolant_existence(left, consequent, 2);
    if (!v.decision || !v.separator) return false;
    const ModelClass bin = ModelClass::binary();
    return signature_of(*v.separator).subset_of(Signature{"a"}) && entails(left, *v.separator, bin) &&
           entails(*v.separator, consequent, bin) && entails(*v.separator, f("<>a"), bin);
  });
  return print(1, "paper instances", r, "slowest instance " + std::to_string(slowest) + " s");
}

// ---------------------------------------------------------------------------

bool criterion_gadget() {
  Report r;
  GadgetPair g = gadget(1);
  const Signature sigma{"a"};
  int pairs = 0;
  SearchOutcome outcome =
      for_each_joint_witness(g.left, g.right, sigma, 2, 3, 50'000'000, [&](const KripkeTree& m, const KripkeTree& m2) {
        ++pairs;
        // two a-children of the root told apart by b0, both linked to one a-child on the right
        std::vector<int> left_a, right_a;
        for (int v : m.children(0))
          if (m.holds(v, "a")) left_a.push_back(v);
        for (int v : m2.children(0))
          if (m2.holds(v, "a")) right_a.push_back(v);
        bool found = false;
        for (int w0 : left_a)
          for (int w1 : left_a) {
            if (m.holds(w0, "b0") == m.holds(w1, "b0")) continue;
            for (int hat : right_a) {
              KripkeTree s0 = m.subtree(w0), s1 = m.subtree(w1), s2 = m2.subtree(hat);
              if (check_bisim(s0, s2, sigma, 1) && check_bisim(s1, s2, sigma, 1)) found = true;
            }
          }
        r.expect(found, to_string(m) + " / " + to_string(m2));
        return true;
      });
  r.expect(outcome != SearchOutcome::BudgetHit, "oracle budget");
  r.expect(pairs > 0, "no witness pairs");
  return print(2, "gadget linkage", r, std::to_string(pairs) + " witness pairs, outcome " + to_string(outcome));
}

// ---------------------------------------------------------------------------

bool criterion_tallness() {
  Report r;
  Rng rng(2024);
  Signature sigma{"a"};
  int checked = 0, all_n = 0, skipped = 0, max_bound = 0;
  for (int i = 0; i < 400 && checked < 40; ++i) {
    const int d = pick(rng, 1, 2);
    Npta a = random_npta(rng, sigma, pick(rng, 1, 3), d), a2 = random_npta(rng, sigma, pick(rng, 1, 3), d);
    if (is_empty(a) || is_empty(a2)) continue;
    ConsistencyReport rep = consistency_report(a, a2, sigma);
    const int m = static_cast<int>(a.size() * a2.size()) + 1;
    std::string name = "pair " + std::to_string(i);
    r.expect(rep.bound == m, name + " bound");
    r.expect(rep.stabilized_at <= rep.product_size + 1, name + " stabilization");
    r.expect(consistency_for_all_n(a, a2, sigma, d) == rep.all_n, name + " all-n flag");
    // Consistency at n implies consistency below n, so two probes settle every n <= m.
    auto probe = [&](int n) { return joint_consistency_bruteforce(a, a2, sigma, n, 2'000'000).outcome; };
    bool in_budget = true, agree = true;
    if (rep.all_n) {
      SearchOutcome o = probe(m);
      in_budget = o != SearchOutcome::BudgetHit;
      agree = o == SearchOutcome::Found;
    } else {
      SearchOutcome at = probe(rep.first_failure);
      in_budget = at != SearchOutcome::BudgetHit;
      agree = at == SearchOutcome::ExhaustedNone;
      if (in_budget && agree && rep.first_failure > 0) {
        SearchOutcome below = probe(rep.first_failure - 1);
        in_budget = below != SearchOutcome::BudgetHit;
        agree = below == SearchOutcome::Found;
      }
      r.expect(rep.first_failure <= m, name + " failure beyond m");
    }
    if (!in_budget) {
      ++skipped;
      continue;
    }
    ++checked;
    all_n += rep.all_n ? 1 : 0;
    max_bound = std::max(max_bound, m);
    r.expect(agree, name + (rep.all_n ? " consistent for all n" : " fails at " + std::to_string(rep.first_failure)));
  }
  r.expect(checked >= 20, "fewer than 20 pairs in budget");
  return print(3, "tallness bound", r,
               std::to_string(checked) + " pairs (" + std::to_string(all_n) + " consistent for all n, largest m " +
                   std::to_string(max_bound) + ", " + std::to_string(skipped) + " over budget)");
}

// ---------------------------------------------------------------------------

Formula dia_power(int n) {
  Formula out = Formula::top();
  for (int i = 0; i < n; ++i) out = Formula::dia(out);
  return out;
}

bool criterion_uniform() {
  Report r;
  Npta inf_word = muml_to_npta(normalize(theta_inf()), 1);
  for (int n = 1; n <= 3; ++n) {
    Formula psi = uniform_consequence_words(inf_word, n);
    r.expect(!equivalence_bruteforce(psi, dia_power(n), 1, n + 2).has_value(), "words n=" + std::to_string(n));
  }
  constexpr double kSizeFactor = 16.0;
  double worst = 0;
  for (const char* text : {"nu X. <>X", "mu X. a | <>X", "nu X. (a & <>~a & <>X) | (~a & <>X)", "nu X. <>(a & <>(~a & X))"}) {
    Npta a = muml_to_npta(f(text), 1);
    for (int n = 1; n <= 12; ++n) {
      double ratio = static_cast<double>(formula_size(uniform_consequence_words(a, n))) / (static_cast<double>(a.size()) * n * n);
      worst = std::max(worst, ratio);
      r.expect(ratio <= kSizeFactor, std::string(text) + " size at n=" + std::to_string(n));
    }
  }

  // psi |= theta iff A |= theta for modal theta of depth <= n over {a}: equivalently psi holds
  // exactly on the trees whose (sigma,n)-type some model of A realizes.
  const Signature sigma{"a"};
  int trees = 0;
  for (ModelClass c : {ModelClass::all(), ModelClass::binary()})
    for (const char* text : {"nu X. <>X", "[]false", "mu X. a | <>X", "<>a & []<>~a", "nu X. ~a & []X"}) {
      Formula phi = f(text);
      Npta a = class_automaton(phi, c);
      if (c == ModelClass::binary()) a = duplication_safe_closure(a);
      for (int n = 0; n <= 2; ++n) {
        Formula psi = uniform_consequence(a, n, c, sigma);
        r.expect(entails(phi, psi, c), std::string(text) + " entails its consequence");
        std::map<std::string, bool> realized;
        auto check = [&](const KripkeTree& m) {
          ++trees;
          std::string key = bisim_key(m, sigma, n);
          auto it = realized.find(key);
          if (it == realized.end()) {
            auto s = joint_consistency_bruteforce(phi, normalize(characteristic_formula(m, sigma, n)), sigma, n, 3,
                                                  20'000'000);
            r.expect(s.outcome != SearchOutcome::BudgetHit, "oracle budget");
            it = realized.emplace(key, s.outcome == SearchOutcome::Found).first;
          }
          r.expect(fixpoint_eval(m, psi) == it->second, std::string(text) + " over " + c.to_string() + " n=" +
                                                             std::to_string(n) + " at " + to_string(m));
          return true;
        };
        for_each_tree(sigma, 2, 3, check);
        if (c == ModelClass::all()) for_each_tree(sigma, 3, 2, check);
      }
    }
  return print(4, "uniform consequences", r,
               "largest size/(|Q| n^2) " + std::to_string(worst) + ", " + std::to_string(trees) + " tree checks");
}

// ---------------------------------------------------------------------------

bool criterion_quotient() {
  Report r;
  Rng rng(77);
  const Signature sigma{"a"};
  auto trees = enumerate_trees(sigma, 2, 3, 100000);
  int automata = 0, members = 0;
  for (int i = 0; i < 200 && automata < 12; ++i) {
    Npta a = random_npta(rng, sigma, pick(rng, 1, 3), 2, 0.4);
    Npta q;
    try {
      q = quotient_automaton(a);
    } catch (const UnsupportedAutomaton&) {
      continue;
    }
    if (is_empty(a)) continue;
    ++automata;
    for (const auto& t : trees) {
      bool expected = bisim_quotient_member_bruteforce(a, t, 2);
      members += expected ? 1 : 0;
      r.expect(accepts_finite(q, t) == expected, "automaton " + std::to_string(i) + " on " + to_string(t));
    }
  }
  r.expect(automata >= 10, "fewer than 10 automata");
  return print(5, "quotient automata", r,
               std::to_string(automata) + " automata x " + std::to_string(trees.size()) + " trees, " +
                   std::to_string(members) + " memberships");
}

// ---------------------------------------------------------------------------

bool criterion_definability() {
  Report r;
  r.expect(decide_definability(f("<>a"), ModelClass::all()).decision, "<>a definable");
  r.expect(!decide_definability(normalize(theta_inf()), ModelClass::all()).decision, "theta_inf not definable");
  r.expect(!decide_mu_definability_graded(f("<2>true")).mu.decision, "<2>true not mu-definable");
  r.expect(decide_mu_definability_graded(f("<1>a")).mu.decision, "<1>a mu-definable");
  return print(6, "definability", r);
}

// ---------------------------------------------------------------------------

bool criterion_concordance(Clock::time_point suite_start) {
  Report r;
  int checked = 0, over_budget = 0, separable = 0;
  auto run = [&](const Formula& phi, const Formula& phi2, const ModelClass& c, const std::optional<Signature>& sigma) {
    Verdict v = decide_separability(phi, phi2, c, sigma);
    Signature s = sigma ? *sigma : signature_of(phi).unite(signature_of(phi2));
    Concordance k = check_concordance(phi, phi2, c, s, v);
    if (!k.checked) {
      ++over_budget;
      return;
    }
    ++checked;
    separable += v.decision ? 1 : 0;
    r.expect(k.agrees, k.detail);
  };
  const Formula inf = normalize(theta_inf());
  const std::vector<ModelClass> classes{ModelClass::words(), ModelClass::binary(), ModelClass::all(),
                                        ModelClass::dary(3), ModelClass::finite(ModelClass::words()),
                                        ModelClass::finite(ModelClass::binary())};
  for (const ModelClass& c : classes) {
    run(inf, f("[]false"), c, std::nullopt);
    run(inf, f("mu X. []X"), c, std::nullopt);
    run(f("<>a"), f("[]~a"), c, std::nullopt);
    run(f("mu X. a | <>X"), f("nu X. ~a & []X"), c, std::nullopt);
  }
  run(f("<>(a & b) & <>(a & ~b)"), f("<>(~a & c) & <>(~a & ~c)"), ModelClass::dary(3), Signature{"a"});
  run(f("<>(a & b) & <>(a & ~b)"), f("<>(~a & c) & <>(~a & ~c)"), ModelClass::binary(), Signature{"a"});

  Rng rng(7);
  FormulaShape shape;
  shape.sigma = Signature{"a"};
  shape.fixpoints = true;
  for (int i = 0; i < 100; ++i) {
    Formula phi = normalize(random_formula(rng, shape)), phi2 = normalize(random_formula(rng, shape));
    for (const ModelClass& c : classes) {
      if (c.base_kind() == ModelClass::Kind::All && witness_degree(phi) + witness_degree(phi2) > 3) continue;
      if (c.base_kind() == ModelClass::Kind::Dary && !(is_modal_logic(phi) && is_modal_logic(phi2))) continue;
      run(phi, phi2, c, std::nullopt);
    }
    run(phi, normalize(Formula::neg(phi)), ModelClass::binary(), std::nullopt);
  }
  r.expect(checked >= 300, "fewer than 300 verdicts checked");
  const double total = seconds_since(suite_start);
  r.expect(total <= 15 * 60, "suite took " + std::to_string(total) + " s");
  return print(7, "oracle concordance", r,
               std::to_string(checked) + " verdicts (" + std::to_string(separable) + " separable, " +
                   std::to_string(over_budget) + " over budget), suite " + std::to_string(total) + " s");
}

}  // namespace

int main() {
  const auto start = Clock::now();
  bool ok = true;
  ok &= criterion_instances();
  ok &= criterion_gadget();
  ok &= criterion_tallness();
  ok &= criterion_uniform();
  ok &= criterion_quotient();
  ok &= criterion_definability();
  ok &= criterion_concordance(start);
  return ok ? 0 : 1;
}
