#include <doctest.h>

#include <cstdlib>
#include <random>
#include <set>
#include <sstream>

#include "seqguess/cli.hpp"
#include "seqguess/io.hpp"

using namespace seqguess;

namespace {

std::vector<RatFun> ints(std::initializer_list<long> v) {
  std::vector<RatFun> out;
  for (long x : v) out.emplace_back(x);
  return out;
}

GuessResult first(const std::vector<RatFun>& t, GuessClass c, GuessOptions o = {}) {
  auto r = guess(t, c, o);
  REQUIRE_FALSE(r.empty());
  return r[0];
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args, const std::string& input = "") {
  std::istringstream in(input);
  std::ostringstream out, err;
  int code = runCli(args, in, out, err);
  return {code, out.str(), err.str()};
}

void sameResult(const GuessResult& a, const GuessResult& b) {
  CHECK(a.cls == b.cls);
  CHECK(a.schema.q == b.schema.q);
  CHECK(a.schema.interp == b.schema.interp);
  CHECK(a.schema.monomials == b.schema.monomials);
  CHECK(a.equation == b.equation);
  CHECK(a.initial == b.initial);
  CHECK(a.check == b.check);
  CHECK(a.bounds == b.bounds);
  CHECK(a.conditionLimit == b.conditionLimit);
  CHECK(renderText(a) == renderText(b));
}

}  // namespace

TEST_CASE("sequence parsing") {
  CHECK(parseSequence("0, 1, 4, 9").terms == ints({0, 1, 4, 9}));
  CHECK(parseSequence("[0,1,4,9]").terms == ints({0, 1, 4, 9}));
  CHECK(parseSequence("1 2 3").terms == ints({1, 2, 3}));
  CHECK(parseSequence("1\n-1\n2 # comment\n").terms == ints({1, -1, 2}));
  CHECK(parseSequence("1/2, -3/4, 0.25").terms ==
        std::vector<RatFun>{RatFun(mpq_class(1, 2)), RatFun(mpq_class(-3, 4)),
                            RatFun(mpq_class(1, 4))});
  CHECK(parseSequence("010, 0.50").terms == std::vector<RatFun>{RatFun(10), RatFun(mpq_class(1, 2))});
  CHECK(parseSequence("2^10, -2^2, (1+1)(3)").terms == ints({1024, -4, 6}));

  RatFun q = RatFun::parameter();
  auto s = parseSequence("1, 1+q+q^2, (1+q+q^2)*(1+q^2)", "q").terms;
  REQUIRE(s.size() == 3);
  CHECK(s[1] == RatFun(1) + q + q * q);
  CHECK(s[2] == (RatFun(1) + q + q * q) * (RatFun(1) + q * q));
  CHECK(parseTerm("2q(1 + q)", "q") == RatFun(2) * q * (RatFun(1) + q));
  CHECK(parseTerm("q^-1", "q") == q.inverse());
  CHECK(parseTerm("1/(q - 1)", "q") == (q - RatFun(1)).inverse());
}

TEST_CASE("parse errors carry positions") {
  try {
    parseSequence("1, 2,\n3, x");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
    CHECK(e.column() == 4);
  }
  CHECK_THROWS_AS(parseSequence("1,,2"), ParseError);
  CHECK_THROWS_AS(parseSequence("1, (2"), ParseError);
  CHECK_THROWS_AS(parseSequence("[1, 2"), ParseError);
  CHECK_THROWS_AS(parseSequence(""), ParseError);
  CHECK_THROWS_AS(parseTerm("1/0"), ParseError);
  CHECK_THROWS_AS(parseTerm("t", "q"), ParseError);
  CHECK_THROWS_AS(parseTerm("2 $"), ParseError);
}

TEST_CASE("b-files") {
  auto b = parseBFile("0 1\n1 1\n2 2\n3 5");
  CHECK(b.terms == ints({1, 1, 2, 5}));
  CHECK(b.offset == 0);
  auto c = parseBFile("# A000000\n\n3 10\n4 -20  # note\n5 30\n");
  CHECK(c.terms == ints({10, -20, 30}));
  CHECK(c.offset == 3);
  try {
    parseBFile("0 1\n1 2\n3 4\n");
    FAIL("expected an error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 3);
    CHECK(std::string(e.what()).find("expected 2, found 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parseBFile("0\n"), ParseError);
  CHECK_THROWS_AS(parseBFile("a 1\n"), ParseError);
}

TEST_CASE("terms round-trip through the renderer") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<long> c(-50, 50);
  std::uniform_int_distribution<int> deg(0, 4);
  for (int i = 0; i < 200; ++i) {
    std::vector<mpq_class> n, d;
    for (int k = 0, e = deg(rng); k <= e; ++k) n.emplace_back(c(rng), 1 + (c(rng) + 50) % 7);
    for (int k = 0, e = deg(rng); k <= e; ++k) d.emplace_back(c(rng), 1 + (c(rng) + 50) % 5);
    for (auto& x : n) x.canonicalize();
    for (auto& x : d) x.canonicalize();
    PolyQ den(d);
    if (den.isZero()) continue;
    RatFun v(PolyQ(n), den);
    CHECK(parseTerm(v.toString("q"), "q") == v);
  }
}

TEST_CASE("text rendering") {
  CHECK(renderText(first(ints({0, 1, 4, 9}), GuessClass::Rat)) == "[f(n): f(n) = n^2]");
  CHECK(renderText(first(ints({1, 1, 2, 3, 5}), GuessClass::Pade)) ==
        "[[x^n]f(x): (x^2 + x - 1)f(x) + 1 = 0]");
  CHECK(renderText(first(ints({1, 1, 2, 5, 14, 42}), GuessClass::Alg)) ==
        "[[x^n]f(x): x f(x)^2 - f(x) + 1 = 0, f(0) = 1]");
  CHECK(renderText(first(ints({1, 1, 0, 1, -1, 2, -1, 5, -4, 29, -13, 854, -685}),
                         GuessClass::Rec)) ==
        "[f(n): f(n + 2) + f(n + 1) - f(n)^2 = 0, f(0) = 1, f(1) = 1]");
  CHECK(renderText(first(ints({0, 1, 1, 1, 2, 3, 6, 11, 23}), GuessClass::FE)) ==
        "[[x^n]f(x): f(x^2) + f(x)^2 - 2f(x) + 2x = 0, f(x) = x + x^2 + x^3 + 2x^4 + O(x^5)]");
  CHECK(renderText(first(ints({1, 2, 3, 0}), GuessClass::Pade)) ==
        "[[x^n]f(x): f(x) = 3x^2 + 2x + 1]");

  auto sine = parseSequence("0, 1, 0, -1/6, 0, 1/120").terms;
  CHECK(renderText(first(sine, GuessClass::Holo)) ==
        "[[x^n]f(x): f''(x) + f(x) = 0, f(0) = 0, f'(0) = 1]");

  GuessOptions named;
  named.names.function = "a";
  named.names.index = "k";
  CHECK(renderText(first(ints({0, 1, 4, 9}), GuessClass::Rat, named)) == "[a(k): a(k) = k^2]");

  GuessOptions skip;
  skip.check = CheckMode::Skip;
  CHECK(renderText(first(ints({0, 1, 4, 9}), GuessClass::Rat, skip)) ==
        "[f(n): f(n) = n^2] (unchecked)");
}

TEST_CASE("q-binomial closed form") {
  auto t = parseSequence("1, 1+q+q^2, (1+q+q^2)*(1+q^2), (1+q^2)*(1+q+q^2+q^3+q^4)", "q").terms;
  GuessOptions o;
  o.q = true;
  CHECK(renderText(first(t, GuessClass::Rat, o)) ==
        "[f(n): f(n) = (q^3*q^(2n) + (-q^2 - q)q^n + 1)/(q^3 - q^2 - q + 1)]");
}

TEST_CASE("JSON round trip") {
  std::vector<GuessResult> rs;
  rs.push_back(first(ints({0, 1, 4, 9}), GuessClass::Rat));
  rs.push_back(first(ints({1, 1, 2, 3, 5}), GuessClass::Pade));
  rs.push_back(first(ints({1, 1, 2, 5, 14, 42}), GuessClass::Alg));
  rs.push_back(first(ints({1, 1, 0, 1, -1, 2, -1, 5, -4, 29, -13, 854, -685}), GuessClass::Rec));
  rs.push_back(first(ints({0, 1, 1, 1, 2, 3, 6, 11, 23}), GuessClass::FE));
  rs.push_back(first(parseSequence("0, 1, 0, -1/6, 0, 1/120").terms, GuessClass::Holo));
  GuessOptions q;
  q.q = true;
  rs.push_back(first(
      parseSequence("1, 1+q+q^2, (1+q+q^2)*(1+q^2), (1+q^2)*(1+q+q^2+q^3+q^4)", "q").terms,
      GuessClass::Rat, q));
  GuessOptions mixed = q;
  mixed.maxMixedDegree = 2;
  mixed.allDegrees = true;
  rs.push_back(first(parseSequence("1, 1, 2q^2, 6q^6, 24q^12, 120q^20, 720q^30, 5040q^42, "
                                   "40320q^56, 362880q^72",
                                   "q")
                         .terms,
                     GuessClass::PRec, mixed));
  for (const auto& r : rs) {
    std::string text = toJson(r).dump();
    GuessResult back = resultFromJson(nlohmann::json::parse(text));
    sameResult(r, back);
  }
  CHECK(renderText(rs.back()) == "[f(n): -f(n + 1) + (n + 1)q^(2n)*f(n) = 0, f(0) = 1]");

  nlohmann::json bad = toJson(rs[0]);
  bad["schema_version"] = 99;
  CHECK_THROWS_AS(resultFromJson(bad), UsageError);
}

TEST_CASE("operator expressions render and round-trip") {
  GuessOptions o;
  auto es = guessWithOperators(ints({0, 1, 3, 9, 33}), {GuessClass::Rat}, {true, true}, o);
  REQUIRE_FALSE(es.empty());
  CHECK(renderText(es[0], o.names) == "[f(n): f(n) = sum(s=0..n-1, prod(p=0..s-1, p + 2))]");
  OperatorExpr back = exprFromJson(nlohmann::json::parse(toJson(es[0]).dump()));
  CHECK(back.level() == es[0].level());
  for (std::size_t n = 0; n < 12; ++n) CHECK(*evaluate(back, n) == *evaluate(es[0], n));

  auto z = guessWithOperators(ints({0, 0, 1, 2, 6, 24, 120}), {GuessClass::Rat},
                              {false, true}, o);
  REQUIRE_FALSE(z.empty());
  CHECK(renderText(z[0], o.names) ==
        "[f(n): f(n) = prod(p=0..n-3, p + 2) for n >= 2, 0 before]");
  OperatorExpr zb = exprFromJson(toJson(z[0]));
  for (std::size_t n = 0; n < 10; ++n) CHECK(*evaluate(zb, n) == *evaluate(z[0], n));
}

TEST_CASE("command line") {
  auto r = cli({"--class", "rat", "0,1,4,9"});
  CHECK(r.code == kFound);
  CHECK(r.out == "[f(n): f(n) = n^2]\n");

  r = cli({"--class=pade"}, "1\n1\n2\n3\n5\n");
  CHECK(r.code == kFound);
  CHECK(r.out == "[[x^n]f(x): (x^2 + x - 1)f(x) + 1 = 0]\n");

  r = cli({"--class", "rat", "1", "5", "2", "8", "3", "9", "4", "1"});
  CHECK(r.code == kNoGuess);
  CHECK(r.out == "no guess\n");

  CHECK(cli({"--bogus", "1,2,3"}).code == kUsage);
  CHECK(cli({"--class", "nope", "1,2,3"}).code == kUsage);
  CHECK(cli({"--check", "maybe", "1,2,3"}).code == kUsage);
  CHECK(cli({"--homogeneous=0", "1,2,3"}).code == kUsage);
  CHECK(cli({"--max-shift", "2", "--max-derivative", "2", "1,2,3"}).code == kUsage);
  r = cli({"1, 2, y"});
  CHECK(r.code == kUsage);
  CHECK(r.err.find("line 1, column 7") != std::string::npos);
  CHECK(cli({"--bfile", "/nonexistent/b.txt"}).code == kUsage);
  CHECK(cli({"--help"}).code == kFound);

  r = cli({"--json", "--class", "rat", "0,1,4,9"});
  REQUIRE(r.code == kFound);
  auto doc = nlohmann::json::parse(r.out);
  CHECK(doc["schema_version"] == kJsonSchemaVersion);
  REQUIRE(doc["results"].size() == 1);
  GuessResult back = resultFromJson(doc["results"][0]);
  CHECK(renderText(back) == "[f(n): f(n) = n^2]");

  r = cli({"--class", "rat", "--q", "1, 1+q+q^2, (1+q+q^2)*(1+q^2), (1+q^2)*(1+q+q^2+q^3+q^4)"});
  CHECK(r.code == kFound);
  CHECK(r.out.find("q^3*q^(2n)") != std::string::npos);

  r = cli({"--class", "rat", "--operators", "sum,product", "0,1,3,9,33"});
  CHECK(r.code == kFound);
  CHECK(r.out == "[f(n): f(n) = sum(s=0..n-1, prod(p=0..s-1, p + 2))]\n");
  CHECK(cli({"--class", "rat", "--operators", "sum", "--max-level", "0", "0,1,3,9,33"}).code ==
        kNoGuess);
  CHECK(cli({"--operators", "quotient", "1,2,3"}).code == kUsage);

  r = cli({"--class", "holo", "--names", "g,k,z", "0,1,0,-1/6,0,1/120"});
  CHECK(r.out == "[[z^k]g(z): g''(z) + g(z) = 0, g(0) = 0, g'(0) = 1]\n");

  r = cli({"--class", "rat", "--debug", "0,1,4,9"});
  CHECK(r.err.find("prime") != std::string::npos);

  // Seeds change primes, never answers.
  setenv("SEQGUESS_SEED", "12345", 1);
  CHECK(cli({"--class", "rat", "0,1,4,9"}).out == "[f(n): f(n) = n^2]\n");
  setenv("SEQGUESS_SEED", "abc", 1);
  CHECK(cli({"--class", "rat", "0,1,4,9"}).code == kUsage);
  unsetenv("SEQGUESS_SEED");
  CHECK(cli({"--seed", "7", "--class", "rat", "0,1,4,9"}).code == kFound);
}

TEST_CASE("all mode reports each equation once") {
  GuessOptions o;
  o.one = false;
  o.q = true;
  auto t = parseSequence("1, 1/(1-q), 1/((1-q)*(1-q^2)), 1/((1-q)*(1-q^2)*(1-q^3)), "
                         "1/((1-q)*(1-q^2)*(1-q^3)*(1-q^4)), "
                         "1/((1-q)*(1-q^2)*(1-q^3)*(1-q^4)*(1-q^5))",
                         "q")
               .terms;
  auto rs = guess(t, GuessClass::Holo, o);
  REQUIRE_FALSE(rs.empty());
  std::set<std::string> seen;
  for (const auto& r : rs) CHECK(seen.insert(renderText(r)).second);
  CHECK(renderText(rs[0]).rfind("[[x^n]f(x): f(q*x) + (x - 1)f(x) = 0", 0) == 0);

  GuessOptions a;
  a.one = false;
  auto cat = guess(ints({1, 1, 2, 5, 14, 42, 132, 429}), GuessClass::Alg, a);
  std::set<std::string> texts;
  for (const auto& r : cat) CHECK(texts.insert(renderText(r)).second);
}
