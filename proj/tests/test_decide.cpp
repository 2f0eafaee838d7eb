#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "modsep/construct.hpp"
#include "modsep/decide.hpp"
#include "modsep/games.hpp"
#include "modsep/oracle.hpp"
#include "concordance.hpp"
#include "support.hpp"

using namespace modsep;
using namespace modsep::testing;

namespace {

Formula f(const char* text) { return normalize(parse_formula(text)); }

const Formula kInf = normalize(theta_inf());
const Formula kLeaf = normalize(parse_formula("[]false"));
const Formula kFinite = normalize(parse_formula("mu X. []X"));
const Formula kFigLeft = normalize(parse_formula("<>(a & b) & <>(a & ~b)"));
const Formula kFigRight = normalize(parse_formula("<>(~a & c) & <>(~a & ~c)"));

// Independent of the automata: a separator must hold on every small model of phi and fail on
// every small model of phi2.
void check_on_small_trees(const Formula& phi, const Formula& phi2, const Formula& psi, int d, int depth) {
  Signature sigma = signature_of(phi).unite(signature_of(phi2)).unite(signature_of(psi));
  if (sigma.size() > 2) return;
  for (const auto& t : enumerate_trees(sigma, std::min(d, 2), depth, 50000)) {
    if (model_check(t, phi)) CHECK(fixpoint_eval(t, psi));
    if (model_check(t, phi2)) CHECK_FALSE(fixpoint_eval(t, psi));
  }
}

void check_verdict_shape(const Verdict& v, const Formula& phi, const Formula& phi2, const ModelClass& c,
                         int depth = 3) {
  if (v.decision) {
    REQUIRE(v.separator.has_value());
    CHECK(v.verified);
    CHECK(verify_separator(phi, phi2, *v.separator, c).holds());
    check_on_small_trees(phi, phi2, *v.separator, c.degree() < 0 ? 3 : c.degree(), depth);
  } else {
    REQUIRE(v.evidence.has_value());
    CHECK(check_bisim(v.evidence->left, v.evidence->right, v.evidence->sigma, v.evidence->n).has_value());
  }
}

}  // namespace

TEST_CASE("infinite path against a leaf") {
  for (ModelClass c : {ModelClass::all(), ModelClass::words(), ModelClass::binary(), ModelClass::dary(3)}) {
    Verdict v = decide_separability(kInf, kLeaf, c);
    CHECK(v.decision);
    CHECK(v.label == "SEPARABLE");
    check_verdict_shape(v, kInf, kLeaf, c);
    CHECK(v.trace.bound >= 2);
  }
  Verdict all = decide_separability(kInf, kLeaf, ModelClass::all());
  CHECK(*all.separator == f("<>true"));
}

TEST_CASE("infinite path against finite trees") {
  for (ModelClass c : {ModelClass::all(), ModelClass::words(), ModelClass::binary(), ModelClass::dary(3)}) {
    Verdict v = decide_separability(kInf, kFinite, c);
    CHECK_FALSE(v.decision);
    CHECK(v.label == "NOT_SEPARABLE");
    check_verdict_shape(v, kInf, kFinite, c);
  }
}

TEST_CASE("figure pair over ternary and binary trees") {
  Verdict ternary = decide_separability(kFigLeft, kFigRight, ModelClass::dary(3), Signature{"a"});
  CHECK_FALSE(ternary.decision);
  check_verdict_shape(ternary, kFigLeft, kFigRight, ModelClass::dary(3));
  Verdict binary = decide_separability(kFigLeft, kFigRight, ModelClass::binary(), Signature{"a"});
  CHECK(binary.decision);
  check_verdict_shape(binary, kFigLeft, kFigRight, ModelClass::binary());
  CHECK(signature_of(*binary.separator).subset_of(Signature{"a"}));
}

TEST_CASE("interpolant existence") {
  Formula consequent = normalize(Formula::neg(kFigRight));
  Verdict d3 = decide_interpolant_existence(kFigLeft, consequent, 3);
  CHECK_FALSE(d3.decision);
  CHECK(d3.label == "NOT_INTERPOLABLE");
  REQUIRE(d3.evidence.has_value());
  CHECK(check_bisim(d3.evidence->left, d3.evidence->right, Signature{"a"}, d3.evidence->n).has_value());
  CHECK(model_check(d3.evidence->left, kFigLeft));
  CHECK(model_check(d3.evidence->right, kFigRight));

  Verdict d2 = decide_interpolant_existence(kFigLeft, consequent, 2);
  CHECK(d2.decision);
  REQUIRE(d2.separator.has_value());
  CHECK(signature_of(*d2.separator).subset_of(Signature{"a"}));
  CHECK(entails(kFigLeft, *d2.separator, ModelClass::binary()));
  CHECK(entails(*d2.separator, consequent, ModelClass::binary()));
  CHECK(entails(*d2.separator, f("<>a"), ModelClass::binary()));

  for (int d : {1, 2, 3, -1}) {
    Verdict v = decide_interpolant_existence(f("a"), f("a | b"), d);
    CHECK(v.decision);
    CHECK(*v.separator == f("a"));
  }
  CHECK_THROWS_AS(decide_interpolant_existence(kInf, f("a"), 2), std::invalid_argument);
}

TEST_CASE("definability") {
  for (ModelClass c : {ModelClass::all(), ModelClass::words(), ModelClass::binary(), ModelClass::dary(3)}) {
    Verdict dia = decide_definability(f("<>a"), c);
    CHECK(dia.decision);
    CHECK(dia.label == "DEFINABLE");
    REQUIRE(dia.separator.has_value());
    CHECK_FALSE(equivalence_bruteforce(*dia.separator, f("<>a"), std::clamp(c.degree(), 1, 3), 2).has_value());
  }
  CHECK_FALSE(decide_definability(kInf, ModelClass::all()).decision);
  CHECK(decide_definability(kInf, ModelClass::all()).label == "NOT_DEFINABLE");
  CHECK_FALSE(decide_definability(f("mu X. a | <>X"), ModelClass::words()).decision);
  // over finite words theta_inf is false everywhere
  Verdict fin = decide_definability(kInf, ModelClass::finite(ModelClass::words()));
  CHECK(fin.decision);
  CHECK(*fin.separator == Formula::bottom());
}

TEST_CASE("definability is separability from the negation") {
  Rng rng(97);
  FormulaShape shape;
  shape.sigma = Signature{"a"};
  shape.fixpoints = true;
  for (int i = 0; i < 40; ++i) {
    Formula phi = normalize(random_formula(rng, shape));
    for (ModelClass c : {ModelClass::words(), ModelClass::binary()}) {
      Verdict def = decide_definability(phi, c);
      Verdict sep = decide_separability(phi, normalize(Formula::neg(phi)), c, signature_of(phi));
      CHECK(def.decision == sep.decision);
      if (def.decision) CHECK_FALSE(equivalence_bruteforce(*def.separator, phi, c.degree(), 3).has_value());
    }
  }
}

TEST_CASE("graded separability") {
  Verdict g = decide_graded_separability(kInf, kLeaf, true);
  CHECK(g.decision);
  check_verdict_shape(g, kInf, kLeaf, ModelClass::all());
  CHECK_FALSE(decide_graded_separability(kInf, kFinite, false).decision);
  Verdict two = decide_graded_separability(f("<2>a"), f("[]~a"), true);
  CHECK(two.decision);
  REQUIRE(two.separator.has_value());
  CHECK(verify_separator(f("<2>a"), f("[]~a"), *two.separator, ModelClass::all()).holds());
  // one a-child against two: only a graded formula tells them apart
  Formula one = f("<>a & [1]false"), pair = f("<2>a & [2]false");
  CHECK(decide_graded_separability(one, pair, true).decision);
  CHECK_FALSE(decide_graded_separability(one, pair, false).decision);
}

TEST_CASE("graded definability") {
  GradedDefinability two = decide_mu_definability_graded(f("<2>true"));
  CHECK_FALSE(two.mu.decision);
  CHECK(two.mu.label == "NOT_MU_DEFINABLE");
  REQUIRE(two.mu.counterexample.has_value());
  CHECK(model_check(*two.mu.counterexample, f("<>true")) != model_check(*two.mu.counterexample, f("<2>true")));
  CHECK_FALSE(two.ml.has_value());

  GradedDefinability one = decide_mu_definability_graded(f("<1>a"));
  CHECK(one.mu.decision);
  REQUIRE(one.ml.has_value());
  CHECK(one.ml->decision);

  CHECK_FALSE(decide_mu_definability_graded(normalize(theta_d(2))).mu.decision);
  GradedDefinability inf = decide_mu_definability_graded(kInf);
  CHECK(inf.mu.decision);
  REQUIRE(inf.ml.has_value());
  CHECK_FALSE(inf.ml->decision);
}

TEST_CASE("finite-tree reduction") {
  auto [l, r] = reduce_finite_trees(f("a"), f("b"));
  CHECK_FALSE(equivalence_bruteforce(l, Formula::conj(f("a"), kFinite), 2, 3).has_value());
  CHECK_FALSE(equivalence_bruteforce(r, Formula::conj(f("b"), kFinite), 2, 3).has_value());
  auto [l2, r2] = reduce_finite_trees(l, r);
  CHECK_FALSE(equivalence_bruteforce(l, l2, 2, 3).has_value());
  CHECK_FALSE(equivalence_bruteforce(r, r2, 2, 3).has_value());
  Verdict v = decide_separability(kInf, kFinite, ModelClass::finite(ModelClass::all()));
  CHECK(v.decision);
  CHECK(*v.separator == Formula::bottom());
  Verdict w = decide_separability(f("mu X. a | <>X"), f("[]false & ~a"), ModelClass::finite(ModelClass::binary()));
  check_verdict_shape(w, f("mu X. a | <>X & mu Y. []Y"), f("[]false & ~a"), ModelClass::binary());
}

TEST_CASE("Craig separability") {
  CHECK(decide_craig_separability(kInf, kLeaf, ModelClass::all()).decision);
  Verdict lit = decide_craig_separability(f("a"), f("~a"), ModelClass::words());
  CHECK(lit.decision);
  CHECK(lit.label == "CRAIG_SEPARABLE");
  CHECK(*lit.separator == f("a"));
  CHECK_FALSE(decide_craig_separability(kInf, kFinite, ModelClass::binary()).decision);
  CHECK_THROWS_AS(decide_craig_separability(kFigLeft, kFigRight, ModelClass::dary(3)), std::invalid_argument);
}

TEST_CASE("larger signatures only help") {
  Rng rng(101);
  FormulaShape shape;
  shape.fixpoints = true;
  shape.depth = 2;
  int separable_small = 0;
  for (int i = 0; i < 60; ++i) {
    Formula phi = normalize(random_formula(rng, shape)), phi2 = normalize(random_formula(rng, shape));
    for (ModelClass c : {ModelClass::words(), ModelClass::binary(), ModelClass::all()}) {
      bool small = decide_separability(phi, phi2, c, Signature{"a"}).decision;
      bool large = decide_separability(phi, phi2, c, Signature{"a", "b"}).decision;
      if (small) {
        ++separable_small;
        CHECK(large);
      }
    }
  }
  CHECK(separable_small > 10);
}

TEST_CASE("verdicts agree with the joint-consistency oracle") {
  Rng rng(103);
  FormulaShape shape;
  shape.sigma = Signature{"a"};
  shape.fixpoints = true;
  shape.depth = 3;
  int checked = 0, separable = 0;
  for (int i = 0; i < 80; ++i) {
    Formula phi = normalize(random_formula(rng, shape)), phi2 = normalize(random_formula(rng, shape));
    for (ModelClass c : {ModelClass::words(), ModelClass::binary(), ModelClass::all(), ModelClass::finite(ModelClass::words())}) {
      if (c == ModelClass::all() && witness_degree(phi) + witness_degree(phi2) > 3) continue;
      Verdict v = decide_separability(phi, phi2, c);
      check_verdict_shape(v, phi, phi2, c, 2);
      Concordance r = check_concordance(phi, phi2, c, signature_of(phi).unite(signature_of(phi2)), v);
      CHECK_MESSAGE(r.agrees, r.detail);
      if (r.checked) {
        ++checked;
        separable += v.decision ? 1 : 0;
      }
    }
  }
  CHECK(checked >= 200);
  CHECK(separable >= 20);
  CHECK(checked - separable >= 20);
}

TEST_CASE("verdicts are deterministic") {
  for (ModelClass c : {ModelClass::all(), ModelClass::binary(), ModelClass::dary(3)}) {
    Verdict a = decide_separability(kFigLeft, kFigRight, c, Signature{"a"});
    Verdict b = decide_separability(kFigLeft, kFigRight, c, Signature{"a"});
    CHECK(a.decision == b.decision);
    CHECK(a.separator == b.separator);
    CHECK(a.trace.depth_bound == b.trace.depth_bound);
    if (a.evidence) CHECK(to_string(a.evidence->left) == to_string(b.evidence->left));
  }
}
