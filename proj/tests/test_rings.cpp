#include <doctest.h>

#include <random>

#include "seqguess/rings.hpp"

using namespace seqguess;

namespace {

PolyQ polyQ(std::initializer_list<long> c) {
  std::vector<mpq_class> v;
  for (long x : c) v.emplace_back(x);
  return PolyQ(v);
}

}  // namespace

TEST_CASE("cauchyMulTrunc") {
  ModPrime f(101);
  std::vector<Residue> a{1, 1}, b{1, 100};
  CHECK(cauchyMulTrunc(a, b, 3, f) == std::vector<Residue>{1, 0, 100});
  std::vector<Residue> one{1};
  std::vector<Residue> s{5, 7, 9, 11};
  CHECK(cauchyMulTrunc(s, one, 4, f) == s);

  std::mt19937_64 rng(5);
  ModPrime g(2147483629u);
  std::uniform_int_distribution<Residue> d(0, g.value() - 1);
  for (int t = 0; t < 50; ++t) {
    std::vector<Residue> x(20), y(15);
    for (auto& v : x) v = d(rng);
    for (auto& v : y) v = d(rng);
    auto r = cauchyMulTrunc(x, y, 25, g);
    for (std::size_t k = 0; k < 25; ++k) {
      mpz_class acc = 0;
      for (std::size_t i = 0; i <= k; ++i) {
        if (i < x.size() && k - i < y.size()) acc += mpz_class(x[i]) * mpz_class(y[k - i]);
      }
      CHECK(r[k] == mpz_class(acc % g.value()).get_ui());
    }
  }
}

TEST_CASE("reducePolyScalar and evalPolyAt") {
  ModPrime p5(5), p7(7);
  auto r = reducePolyScalar(RatFun(polyQ({7, 1})), p5);
  CHECK(r.num == ModPoly{2, 1});
  CHECK(r.den == ModPoly{1});
  // t / (5t) is normalised to 1/5 over Q, so build the unreduced image directly.
  CHECK_THROWS_AS(reducePolyScalar(RatFun(polyQ({1}), polyQ({5})), p5), BadModulus);
  // (3t^2-3)/(t-1) stays unreduced at the coefficient level
  ModPoly num = reducePolyQ(polyQ({-3, 0, 3}), p7), den = reducePolyQ(polyQ({-1, 1}), p7);
  CHECK(num == ModPoly{4, 0, 3});
  CHECK(den == ModPoly{6, 1});
  CHECK(evalPolyAt(ModPoly{1, 0, 1}, 3, p7) == 3);
  CHECK(evalPolyAt(ModPoly{4}, 6, p7) == 4);
  CHECK(evalPolyAt(ModPoly{0, 1}, 5, p7) == 5);
}

TEST_CASE("evaluation commutes with reduction") {
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<long> d(-50, 50);
  ModPrime f(1000003);
  for (int t = 0; t < 200; ++t) {
    std::vector<mpq_class> c;
    for (int i = 0; i < 6; ++i) c.emplace_back(d(rng), 1 + std::abs(d(rng)));
    for (auto& x : c) x.canonicalize();
    PolyQ poly(c);
    mpq_class at(d(rng));
    mpq_class exact = poly.eval(at);
    Residue viaMod = evalPolyAt(reducePolyQ(poly, f), reduceScalar(at, f), f);
    CHECK(viaMod == reduceScalar(exact, f));
  }
}

TEST_CASE("CrtAccumulator") {
  CrtAccumulator a(1);
  a.absorb(std::vector<Residue>{2}, 3);
  a.absorb(std::vector<Residue>{2}, 5);
  CHECK(a.values()[0] == 2);
  CHECK(a.modulus() == 15);

  CrtAccumulator b(1);
  b.absorb(std::vector<Residue>{1}, 2);
  b.absorb(std::vector<Residue>{2}, 3);
  CHECK(b.values()[0] == 5);
  CHECK(b.modulus() == 6);
  CHECK_THROWS_AS(b.absorb(std::vector<Residue>{1}, 3), UsageError);

  CrtAccumulator z(2);
  z.absorb(std::vector<Residue>{0, 0}, 1000003);
  z.absorb(std::vector<Residue>{0, 0}, 1000033);
  CHECK(z.values()[0] == 0);
  CHECK(z.values()[1] == 0);
}

TEST_CASE("CrtAccumulator blocks agree with unblocked combination") {
  mpz_class target = mpz_class("123456789012345678901234567890123456789012345678901234567890") *
           mpz_class("98765432109876543210987654321098765432109876543210");
  PrimeSource primes(12);
  CrtAccumulator small(1, 3), big(1, 100);
  for (int i = 0; i < 25; ++i) {
    std::uint32_t p = primes.next().value();
    Residue r = static_cast<Residue>(mpz_fdiv_ui(target.get_mpz_t(), p));
    small.absorb(std::vector<Residue>{r}, p);
    big.absorb(std::vector<Residue>{r}, p);
    CHECK(small.values()[0] == big.values()[0]);
    CHECK(small.modulus() == big.modulus());
    CHECK(small.values()[0] < small.modulus());
  }
  CHECK(small.values()[0] == target);
}

TEST_CASE("NewtonInterpolator") {
  ModPrime f7(7);
  NewtonInterpolator a(f7);
  a.add(0, 1);
  a.add(1, 1);
  CHECK(a.interpolant() == ModPoly{1});
  NewtonInterpolator b(f7);
  b.add(0, 0);
  b.add(1, 1);
  b.add(2, 4);
  CHECK(b.interpolant() == ModPoly{0, 0, 1});
  CHECK_THROWS_AS(b.add(2, 3), UsageError);

  std::mt19937_64 rng(4);
  ModPrime g(1000003);
  std::uniform_int_distribution<Residue> d(0, g.value() - 1);
  for (int t = 0; t < 30; ++t) {
    ModPoly poly(1 + t % 9);
    for (auto& c : poly) c = d(rng);
    if (poly.back() == 0) poly.back() = 1;
    NewtonInterpolator acc(g);
    std::set<Residue> used;
    while (acc.points() < poly.size()) {
      Residue x = d(rng);
      if (!used.insert(x).second) continue;
      acc.add(x, evalPolyAt(poly, x, g));
    }
    CHECK(acc.interpolant() == poly);
  }
}

TEST_CASE("ratRecon") {
  CHECK(*ratRecon(65, 97) == mpq_class(1, 3));
  CHECK(*ratRecon(0, 97) == 0);
  CHECK(*ratRecon(96, 97) == -1);
  CHECK(*ratRecon(48, 97) == mpq_class(-1, 2));
  CHECK_FALSE(ratRecon(7, 97).has_value());
}

TEST_CASE("ratReconVec uses the running denominator") {
  mpz_class mod = mpz_class(1000000007) * mpz_class(998244353);  // about 60 bits
  std::vector<mpz_class> images;
  for (int k : {1, 2, 5}) {
    mpz_class inv3;
    mpz_class three = 3;
    mpz_invert(inv3.get_mpz_t(), three.get_mpz_t(), mod.get_mpz_t());
    images.push_back(mpz_class(k * inv3 % mod));
  }
  RatReconStats stats;
  auto r = ratReconVec(images, mod, &stats);
  REQUIRE(r.has_value());
  CHECK((*r)[0] == mpq_class(1, 3));
  CHECK((*r)[1] == mpq_class(2, 3));
  CHECK((*r)[2] == mpq_class(5, 3));
  CHECK(stats.fullReconstructions == 1);
  CHECK(stats.shortcutHits == 2);

  std::vector<mpz_class> ints{3, 0, mod - 4};
  auto s = ratReconVec(ints, mod);
  CHECK((*s)[0] == 3);
  CHECK((*s)[1] == 0);
  CHECK((*s)[2] == -4);
  std::vector<mpz_class> one{65};
  CHECK((*ratReconVec(one, 97))[0] == *ratRecon(65, 97));
}

TEST_CASE("ratReconVec agrees with entrywise ratRecon") {
  std::mt19937_64 rng(21);
  std::uniform_int_distribution<long> d(-1000, 1000);
  mpz_class mod = mpz_class(2147483629u) * mpz_class(2147483587u);
  for (int t = 0; t < 200; ++t) {
    std::vector<mpz_class> images;
    for (int k = 0; k < 5; ++k) {
      mpq_class q(d(rng), 1 + std::abs(d(rng)));
      q.canonicalize();
      mpz_class inv;
      mpz_class den = q.get_den();
      mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), mod.get_mpz_t());
      mpz_class v = q.get_num() * inv;
      mpz_fdiv_r(v.get_mpz_t(), v.get_mpz_t(), mod.get_mpz_t());
      images.push_back(v);
    }
    auto vec = ratReconVec(images, mod);
    REQUIRE(vec.has_value());
    for (std::size_t k = 0; k < images.size(); ++k) CHECK((*vec)[k] == *ratRecon(images[k], mod));
  }
}

TEST_CASE("polyRatRecon") {
  ModPrime f(1000003);
  NewtonInterpolator poly(f);
  for (Residue x = 1; x <= 5; ++x) poly.add(x, evalPolyAt(ModPoly{3, 0, 2}, x, f));
  auto r = polyRatRecon(poly, 5);
  REQUIRE(r.has_value());
  CHECK(r->num == ModPoly{3, 0, 2});
  CHECK(r->den == ModPoly{1});

  NewtonInterpolator inv(f);
  for (Residue x : {3u, 4u, 5u, 7u, 11u}) inv.add(x, f.inv(f.sub(x, 2)));
  auto s = polyRatRecon(inv, 5);
  REQUIRE(s.has_value());
  CHECK(s->num == ModPoly{1});
  CHECK(s->den == ModPoly{f.value() - 2, 1});

  NewtonInterpolator single(f);
  single.add(9, 17);
  auto c = polyRatRecon(single, 1);
  REQUIRE(c.has_value());
  CHECK(c->num == ModPoly{17});
  CHECK(c->den == ModPoly{1});
}
