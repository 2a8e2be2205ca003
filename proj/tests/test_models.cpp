#include <doctest.h>

#include <random>

#include "seqguess/models.hpp"
#include "seqguess/rings.hpp"

using namespace seqguess;

namespace {

std::vector<RatFun> ints(std::initializer_list<long> v) {
  std::vector<RatFun> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

std::vector<Residue> reduceAll(const std::vector<RatFun>& t, const ModPrime& f) {
  std::vector<Residue> out;
  for (const auto& x : t) out.push_back(reduceScalar(x.rational(), f));
  return out;
}

using Parts = std::vector<std::vector<int>>;

Parts partsOf(const Schema& s) {
  Parts p;
  for (const auto& m : s.monomials) p.push_back(m.parts);
  return p;
}

}  // namespace

TEST_CASE("partitionsLex") {
  CHECK(partitionsLex(3) == Parts{{}, {1}, {1, 1}, {2}, {1, 1, 1}, {2, 1}, {3}});
  CHECK(partitionsLex(0) == Parts{{}});
  auto all = partitionsLex(6);
  std::size_t w6 = std::count_if(all.begin(), all.end(), [](const std::vector<int>& p) {
    int s = 0;
    for (int x : p) s += x;
    return s == 6;
  });
  CHECK(w6 == 11);
  auto four = partitionsLex(4);
  CHECK(Parts(four.begin() + 7, four.end()) ==
        Parts{{1, 1, 1, 1}, {2, 1, 1}, {2, 2}, {3, 1}, {4}});
}

TEST_CASE("buildSchema") {
  SchemaOptions o;
  CHECK(partsOf(buildSchema(GuessClass::PRec, o, 3)) == Parts{{}, {1}, {2}});
  CHECK(partsOf(buildSchema(GuessClass::Rec, o, 4)) == Parts{{}, {1}, {1, 1}, {2}});
  CHECK(partsOf(buildSchema(GuessClass::Alg, o, 3)) == Parts{{}, {1}, {1, 1}});
  CHECK(partsOf(buildSchema(GuessClass::Rat, o, 2)) == Parts{{}, {1}});
  CHECK_THROWS_AS(buildSchema(GuessClass::Pade, o, 3), SchemaExhausted);

  SchemaOptions somos;
  somos.somos = 2;
  CHECK(partsOf(buildSchema(GuessClass::Rec, somos, 3)) == Parts{{3}, {2, 2}, {3, 1}});
  somos.homogeneous = 2;
  CHECK(partsOf(buildSchema(GuessClass::Rec, somos, 2)) == Parts{{2, 2}, {3, 1}});

  SchemaOptions bounded;
  bounded.maxOrder = 1;
  bounded.maxPower = 2;
  CHECK(partsOf(buildSchema(GuessClass::ADE, bounded, 6)) ==
        Parts{{}, {1}, {1, 1}, {2}, {2, 1}, {2, 2}});
  CHECK_THROWS_AS(buildSchema(GuessClass::ADE, bounded, 7), SchemaExhausted);

  SchemaOptions homog;
  homog.homogeneous = -1;
  CHECK(partsOf(buildSchema(GuessClass::PRec, homog, 2)) == Parts{{1}, {2}});

  SchemaOptions mixed;
  mixed.q = true;
  mixed.maxMixedDegree = 1;
  mixed.homogeneous = -1;
  Schema s = buildSchema(GuessClass::PRec, mixed, 4);
  CHECK(s.monomials[0] == Monomial{{1}, 0});
  CHECK(s.monomials[1] == Monomial{{1}, 1});
  CHECK(s.monomials[2] == Monomial{{2}, 0});
  CHECK(s.mixedMode());
}

TEST_CASE("schemas are prefix-closed") {
  std::vector<SchemaOptions> variants(4);
  variants[1].maxOrder = 2;
  variants[2].homogeneous = -1;
  variants[3].somos = 3;
  for (GuessClass c : {GuessClass::Rec, GuessClass::ADE, GuessClass::FE, GuessClass::Alg,
                       GuessClass::Holo}) {
    for (const auto& o : variants) {
      for (std::size_t m = 1; m < 12; ++m) {
        try {
          Schema a = buildSchema(c, o, m), b = buildSchema(c, o, m + 1);
          CHECK(std::equal(a.monomials.begin(), a.monomials.end(), b.monomials.begin()));
        } catch (const SchemaExhausted&) {
        }
      }
    }
  }
}

TEST_CASE("condition loss and known lengths") {
  SchemaOptions o;
  Schema ade = buildSchema(GuessClass::ADE, o, 3);  // 1, f, f^2
  CHECK(ade.conditionLoss() == 0);
  Schema holo = buildSchema(GuessClass::Holo, o, 3);  // 1, f, f'
  CHECK(holo.conditionLoss() == 1);
  CHECK(7 - holo.conditionLoss() == 6);
  CHECK(knownLength(Monomial{{2, 1}, 0}, Interpretation::Derivative, 7) == 6);
  CHECK(knownLength(Monomial{{}, 0}, Interpretation::Shift, 7) == kUnbounded);
  CHECK(knownLength(Monomial{{2}, 0}, Interpretation::Mahler, 9) == 18);
  CHECK(knownLength(Monomial{{2, 1}, 0}, Interpretation::Mahler, 9) == 9);
}

TEST_CASE("buildImages") {
  ModPrime f(1000003);
  SchemaOptions o;
  Schema rat = buildSchema(GuessClass::Rat, o, 2);
  auto pr = buildImages({0, 1, 4, 9}, rat, {3, 1}, 4, f);
  CHECK(pr.streams[0] == std::vector<Residue>{1, 1, 1, 1});
  CHECK(pr.streams[1] == std::vector<Residue>{0, 1, 4, 9});
  CHECK(pr.points == std::vector<Residue>{0, 1, 2, 3});
  CHECK(pr.kind == PointKind::Distinct);

  Schema fe = buildSchema(GuessClass::FE, o, 4);
  CHECK(fe.monomials[3].parts == std::vector<int>{2});
  auto t = reduceAll(ints({0, 1, 1, 1, 2, 3, 6, 11, 23}), f);
  auto img = buildImages(t, fe, {3, 2, 2, 2}, 9, f);
  CHECK(img.streams[3] == std::vector<Residue>{0, 0, 1, 0, 1, 0, 1, 0, 2});

  Schema holo = buildSchema(GuessClass::Holo, o, 3);
  auto six = buildImages({1, 0, 0, 0, 0, 0, 1}, holo, {2, 2, 2}, 6, f);
  CHECK(six.streams[0] == std::vector<Residue>{1, 0, 0, 0, 0, 0});
  CHECK(six.streams[1] == std::vector<Residue>{1, 0, 0, 0, 0, 0});
  CHECK(six.streams[2] == std::vector<Residue>{0, 0, 0, 0, 0, 6});
}

TEST_CASE("cauchyPlan reuses subproducts") {
  SchemaOptions o;
  Schema s = buildSchema(GuessClass::ADE, o, 6);  // 1, f, f^2, f', f^3, f'f
  auto plan = cauchyPlan(s);
  REQUIRE(plan.steps.size() == 3);
  CHECK(plan.steps[0].target == std::vector<int>{1, 1});
  CHECK(plan.steps[1].target == std::vector<int>{1, 1, 1});
  CHECK(plan.steps[1].tail == std::vector<int>{1, 1});
  CHECK(plan.steps[2].target == std::vector<int>{2, 1});
  CHECK(naiveProductCount(s) == 4);
  Schema single = buildSchema(GuessClass::ADE, o, 1);
  CHECK(cauchyPlan(single).steps.empty());
}

TEST_CASE("modular images are images of the exact streams") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<long> d(-20, 20);
  ModPrime f(2147483629u);
  for (GuessClass c : {GuessClass::Rec, GuessClass::ADE, GuessClass::FE, GuessClass::Alg}) {
    for (int trial = 0; trial < 5; ++trial) {
      std::vector<RatFun> terms;
      for (int i = 0; i < 12; ++i) terms.emplace_back(mpq_class(d(rng), 1 + std::abs(d(rng))));
      SchemaOptions o;
      std::size_t m = 5 + trial;
      Schema s = buildSchema(c, o, m);
      std::size_t sigma = terms.size() - s.conditionLoss();
      auto img = buildImages(reduceAll(terms, f), s, std::vector<int>(m, 1), sigma, f);
      for (std::size_t l = 0; l < m; ++l) {
        auto ex = exactStream(terms, s, l, sigma);
        for (std::size_t k = 0; k < sigma; ++k) {
          CHECK(img.streams[l][k] == reduceScalar(ex[k].rational(), f));
        }
      }
    }
  }
}

TEST_CASE("q-dilation and q-point images") {
  ModPrime f(1000003);
  SchemaOptions o;
  o.q = true;
  Schema s = buildSchema(GuessClass::Holo, o, 3);  // 1, f(x), f(qx)
  CHECK(s.interp == Interpretation::QDilation);
  CHECK(s.conditionLoss() == 0);
  std::vector<RatFun> terms = ints({1, 2, 3, 4});
  auto img = buildImages(reduceAll(terms, f), s, {1, 1, 1}, 4, f, Residue{5});
  CHECK(img.streams[2] == std::vector<Residue>{1, 10, 75, 500});
  auto ex = exactStream(terms, s, 2, 4);
  CHECK(ex[2] == RatFun(PolyQ::monomial(3, 2)));

  Schema rat = buildSchema(GuessClass::Rat, o, 2);
  auto r = buildImages(reduceAll(terms, f), rat, {1, 1}, 4, f, Residue{3});
  CHECK(r.points == std::vector<Residue>{1, 3, 9, 27});
  CHECK(exactPoint(rat, 2) == RatFun(PolyQ::monomial(1, 2)));
}
