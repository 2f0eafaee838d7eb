#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>

#include "modsep/construct.hpp"
#include "modsep/games.hpp"
#include "modsep/oracle.hpp"
#include "modsep/translate.hpp"
#include "support.hpp"

using namespace modsep;
using namespace modsep::testing;

namespace {

constexpr std::uint64_t kBudget = 20'000'000;

Formula f(const char* text) { return normalize(parse_formula(text)); }

Formula dia_power(int n) {
  Formula out = Formula::top();
  for (int i = 0; i < n; ++i) out = Formula::dia(out);
  return out;
}

// Is the (sigma,n)-type of m realized by a model of phi? Oracle search, cached per type.
class TypeOracle {
 public:
  TypeOracle(Formula phi, Signature sigma, int n, int d) : phi_(std::move(phi)), sigma_(std::move(sigma)), n_(n), d_(d) {}

  bool realized(const KripkeTree& m) {
    std::string key = bisim_key(m, sigma_, n_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    auto r = joint_consistency_bruteforce(phi_, normalize(characteristic_formula(m, sigma_, n_)), sigma_, n_, d_, kBudget);
    REQUIRE(r.outcome != SearchOutcome::BudgetHit);
    return cache_[key] = r.outcome == SearchOutcome::Found;
  }

 private:
  Formula phi_;
  Signature sigma_;
  int n_;
  int d_;
  std::map<std::string, bool> cache_;
};

const char* const kConsequenceCorpus[] = {"nu X. <>X", "[]false", "mu X. a | <>X", "<>a & []<>~a", "nu X. ~a & []X",
                                          "<>(a & <>true) & [](~a | []false)"};

}  // namespace

TEST_CASE("word consequence of theta_inf is a chain of diamonds") {
  Npta a = muml_to_npta(normalize(theta_inf()), 1);
  for (int n = 1; n <= 3; ++n) {
    Formula psi = uniform_consequence_words(a, n);
    CHECK(modal_depth(psi) <= n);
    CHECK_FALSE(equivalence_bruteforce(psi, dia_power(n), 1, n + 2).has_value());
  }
}

TEST_CASE("word consequences grow polynomially") {
  for (const char* text : {"nu X. <>X", "mu X. a | <>X", "nu X. (a & <>~a & <>X) | (~a & <>X)"}) {
    Npta a = muml_to_npta(f(text), 1, Signature{"a"});
    const double states = static_cast<double>(a.size()) + 1;
    for (int n = 1; n <= 8; ++n) {
      std::size_t size = formula_size(uniform_consequence_words(a, n));
      CHECK(static_cast<double>(size) <= 40.0 * states * states * n * n);
    }
  }
}

TEST_CASE("word consequence of a one-letter language") {
  Npta a = parse_npta("sig: a\narity: 1\nstates: p\nprio: p=1\np , {a} -> ()\n");
  Formula psi = uniform_consequence_words(a, 1);
  CHECK_FALSE(equivalence_bruteforce(psi, f("a & []false"), 1, 3).has_value());
}

TEST_CASE("word consequences match realized types") {
  Signature sigma{"a"};
  for (const char* text : kConsequenceCorpus) {
    Formula phi = f(text);
    Npta a = muml_to_npta(phi, 1, sigma);
    for (int n = 0; n <= 3; ++n) {
      Formula psi = uniform_consequence_words(a, n, sigma);
      TypeOracle oracle(phi, sigma, n, 1);
      for_each_tree(sigma, 1, n + 1, [&](const KripkeTree& m) {
        CHECK_MESSAGE(fixpoint_eval(m, psi) == oracle.realized(m), text, " n=", n, " ", to_string(m));
        return true;
      });
    }
  }
  CHECK_THROWS_AS(uniform_consequence_words(muml_to_npta(f("<>a"), 2), 1), std::invalid_argument);
}

TEST_CASE("tree consequences match realized types") {
  Signature sigma{"a"};
  for (ModelClass c : {ModelClass::all(), ModelClass::binary()}) {
    for (const char* text : kConsequenceCorpus) {
      Formula phi = f(text);
      Npta a = class_automaton(phi, c);
      if (c == ModelClass::binary()) a = duplication_safe_closure(a);
      for (int n = 0; n <= 2; ++n) {
        Formula psi = uniform_consequence(a, n, c, sigma);
        CHECK(modal_depth(psi) <= n);
        CHECK(entails(phi, psi, c));
        TypeOracle oracle(phi, sigma, n, 3);
        for_each_tree(sigma, 2, 3, [&](const KripkeTree& m) {
          CHECK_MESSAGE(fixpoint_eval(m, psi) == oracle.realized(m), text, " n=", n, " ", c.to_string());
          return true;
        });
      }
    }
  }
}

TEST_CASE("tree consequences capture every modal consequence") {
  Rng rng(83);
  Signature sigma{"a"};
  FormulaShape shape;
  shape.sigma = sigma;
  shape.depth = 3;
  int compared = 0;
  for (ModelClass c : {ModelClass::all(), ModelClass::binary()}) {
    for (const char* text : kConsequenceCorpus) {
      Formula phi = f(text);
      Npta a = class_automaton(phi, c);
      if (c == ModelClass::binary()) a = duplication_safe_closure(a);
      for (int n = 1; n <= 2; ++n) {
        Formula psi = uniform_consequence(a, n, c, sigma);
        for (int i = 0; i < 60; ++i) {
          Formula theta = normalize(random_formula(rng, shape));
          if (modal_depth(theta) > n) continue;
          ++compared;
          CHECK(entails(psi, theta, c) == entails(phi, theta, c));
        }
      }
    }
  }
  CHECK(compared >= 300);
}

TEST_CASE("uniform consequence over all models of theta_inf at depth 1") {
  Formula psi = uniform_consequence(class_automaton(normalize(theta_inf()), ModelClass::all()), 1, ModelClass::all());
  CHECK_FALSE(equivalence_bruteforce(psi, f("<>true"), 3, 2).has_value());
}

TEST_CASE("binary consequences need duplication safety") {
  Npta raw = parse_npta("sig:\narity: 2\nstates: p\nprio: p=2\np , {} -> (p)\n");
  CHECK_THROWS_AS(uniform_consequence(raw, 1, ModelClass::binary()), std::invalid_argument);
  CHECK_NOTHROW(uniform_consequence(duplication_safe_closure(raw), 1, ModelClass::binary()));
}

TEST_CASE("verify_separator") {
  Formula inf = normalize(theta_inf()), leaf = f("[]false");
  CHECK(verify_separator(inf, leaf, f("<>true"), ModelClass::all()).holds());
  SeparatorCheck top = verify_separator(inf, leaf, Formula::top(), ModelClass::all());
  CHECK(top.left_ok);
  CHECK_FALSE(top.right_ok);
  REQUIRE(top.countermodel.has_value());
  CHECK(model_check(*top.countermodel, leaf));
  for (ModelClass c : {ModelClass::all(), ModelClass::words(), ModelClass::dary(3), ModelClass::finite(ModelClass::all())})
    CHECK(verify_separator(Formula::bottom(), inf, Formula::bottom(), c).holds());
}

TEST_CASE("type-disjunction separators over ternary trees") {
  Formula inf = normalize(theta_inf()), leaf = f("[]false");
  auto psi = separator_td(inf, leaf, 3, Signature{}, 1);
  REQUIRE(psi.has_value());
  CHECK(verify_separator(inf, leaf, *psi, ModelClass::dary(3)).holds());
  CHECK(signature_of(*psi).empty());
  CHECK(separator_td(Formula::bottom(), leaf, 3, Signature{}, 1) == Formula::bottom());
  Formula left = f("<>(a & b) & <>(a & ~b)"), right = f("<>(~a & c) & <>(~a & ~c)");
  for (int n = 0; n <= 2; ++n) CHECK_FALSE(separator_td(left, right, 3, Signature{"a"}, n).has_value());
  Rng rng(89);
  FormulaShape shape;
  shape.depth = 2;
  for (int i = 0; i < 30; ++i) {
    Formula l = normalize(random_formula(rng, shape)), r = normalize(random_formula(rng, shape));
    if (auto s = separator_td(l, r, 3, Signature{"a"}, 2)) CHECK(signature_of(*s).subset_of(Signature{"a"}));
  }
}

TEST_CASE("interpolants from realized types") {
  CHECK(ml_craig_interpolant(f("a & b"), f("~a & c"), Signature{"a"}) == f("a"));
  Formula dia = ml_craig_interpolant(f("<>(a & b)"), f("[]~a"), Signature{"a"});
  CHECK(verify_separator(f("<>(a & b)"), f("[]~a"), dia, ModelClass::all()).holds());
  CHECK(dia == f("<>a"));
  CHECK(ml_craig_interpolant(f("a"), Formula::bottom(), Signature{"a"}) == f("a"));
  CHECK_THROWS_AS(ml_craig_interpolant(f("a"), f("a & b"), Signature{"a"}), std::domain_error);
  Formula bin = ml_craig_interpolant(f("<>(a & b) & <>(a & ~b)"), f("<>(~a & c) & <>(~a & ~c)"), Signature{"a"}, 2);
  CHECK(verify_separator(f("<>(a & b) & <>(a & ~b)"), f("<>(~a & c) & <>(~a & ~c)"), bin, ModelClass::binary()).holds());
  CHECK_THROWS_AS(
      ml_craig_interpolant(f("<>(a & b) & <>(a & ~b)"), f("<>(~a & c) & <>(~a & ~c)"), Signature{"a"}, 3),
      std::domain_error);
}
