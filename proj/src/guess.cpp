#include "seqguess/guess.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

#include "seqguess/rings.hpp"

namespace seqguess {

namespace {

bool columnRational(const ExactColumn& col) {
  for (const auto& p : col) {
    for (const auto& c : p) {
      if (!c.isRational()) return false;
    }
  }
  return true;
}

bool isZeroPoly(const ExactPoly& p) {
  return std::all_of(p.begin(), p.end(), [](const RatFun& c) { return c.isZero(); });
}

std::size_t trailing(const ExactPoly& p) {
  std::size_t t = 0;
  while (t < p.size() && p[t].isZero()) ++t;
  return t;
}

RatFun evalPoly(const ExactPoly& p, const RatFun& x) {
  RatFun acc;
  for (std::size_t d = p.size(); d-- > 0;) acc = acc * x + p[d];
  return acc;
}

mpq_class evalPolyQ(const ExactPoly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t d = p.size(); d-- > 0;) acc = acc * x + p[d].rational();
  return acc;
}

void trimPoly(ExactPoly& p) {
  while (!p.empty() && p.back().isZero()) p.pop_back();
}

PolyQ polyLcm(const PolyQ& a, const PolyQ& b) {
  PolyQ g = PolyQ::gcd(a, b), q, r;
  PolyQ::divmod(a * b, g, q, r);
  return q.monic();
}

PolyQ polyDiv(const PolyQ& a, const PolyQ& b) {
  PolyQ q, r;
  PolyQ::divmod(a, b, q, r);
  return q;
}

void log(const GuessOptions& o, const std::string& s) {
  if (o.debug) o.debug(s);
}

std::string vecString(const std::vector<int>& v) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  os << ")";
  return os.str();
}

}  // namespace

Evaluator::Evaluator(const std::vector<RatFun>& terms, const Schema& schema, std::size_t maxBound)
    : schema_(schema), n_(terms.size()), series_(isSeriesClass(schema.cls)) {
  rational_ = !schema.q &&
              std::all_of(terms.begin(), terms.end(), [](const RatFun& t) { return t.isRational(); });
  const std::size_t cap = series_ ? n_ + maxBound : n_;
  for (std::size_t l = 0; l < schema.m(); ++l) {
    const std::size_t known = knownLength(schema.monomials[l], schema.interp, n_);
    const std::size_t len = std::min(known, cap);
    known_.push_back(known == kUnbounded ? kUnbounded : len);
    streams_.push_back(exactStream(terms, schema, l, len));
    if (rational_) {
      std::vector<mpq_class> q;
      q.reserve(len);
      for (const auto& v : streams_.back()) q.push_back(v.rational());
      qstreams_.push_back(std::move(q));
    }
  }
}

RatFun Evaluator::point(std::size_t k) const { return exactPoint(schema_, k); }

std::size_t Evaluator::checkable(const ExactColumn& col) const {
  std::size_t limit = kUnbounded;
  for (std::size_t l = 0; l < col.size(); ++l) {
    if (isZeroPoly(col[l]) || known_[l] == kUnbounded) continue;
    const std::size_t lim = series_ ? known_[l] + trailing(col[l]) : known_[l];
    limit = std::min(limit, lim);
  }
  if (limit == kUnbounded) limit = n_;
  return limit;
}

RatFun Evaluator::residual(const ExactColumn& col, std::size_t k) const {
  if (rational_ && columnRational(col)) {
    mpq_class acc = 0;
    if (series_) {
      for (std::size_t l = 0; l < col.size(); ++l) {
        const auto& s = qstreams_[l];
        for (std::size_t d = 0; d < col[l].size() && d <= k; ++d) {
          if (col[l][d].isZero() || k - d >= s.size()) continue;
          acc += col[l][d].rational() * s[k - d];
        }
      }
    } else {
      const mpq_class x(static_cast<unsigned long>(k));
      for (std::size_t l = 0; l < col.size(); ++l) {
        if (isZeroPoly(col[l])) continue;
        acc += evalPolyQ(col[l], x) * qstreams_[l].at(k);
      }
    }
    return RatFun(acc);
  }
  RatFun acc;
  if (series_) {
    for (std::size_t l = 0; l < col.size(); ++l) {
      const auto& s = streams_[l];
      for (std::size_t d = 0; d < col[l].size() && d <= k; ++d) {
        if (col[l][d].isZero() || k - d >= s.size()) continue;
        acc += col[l][d] * s[k - d];
      }
    }
  } else {
    const RatFun x = point(k);
    for (std::size_t l = 0; l < col.size(); ++l) {
      if (isZeroPoly(col[l])) continue;
      acc += evalPoly(col[l], x) * streams_[l].at(k);
    }
  }
  return acc;
}

std::optional<std::size_t> Evaluator::firstFailure(const ExactColumn& col, std::size_t from,
                                                   std::size_t limit) const {
  const std::size_t end = std::min(checkable(col), limit);
  for (std::size_t k = from; k < end; ++k) {
    if (!residual(col, k).isZero()) return k;
  }
  return std::nullopt;
}

std::vector<std::vector<int>> enumerateDegreeVectors(int total, int m, bool allDegrees,
                                                     std::optional<int> maxDegree,
                                                     std::size_t cap) {
  std::vector<std::vector<int>> out;
  if (m < 1 || total < m) return out;
  const int top = maxDegree ? *maxDegree + 1 : total;
  if (!allDegrees) {
    std::vector<int> v(m, total / m);
    for (int i = 0; i < total % m; ++i) ++v[i];
    if (v[0] <= top) out.push_back(v);
    return out;
  }
  const int lowMax = (total + m - 1) / m;
  std::vector<int> cur(m);
  for (int mx = lowMax; mx <= std::min(top, total - m + 1) && out.size() < cap; ++mx) {
    // compositions with parts in [1, mx] in lex order, keeping those reaching mx
    std::function<void(int, int, bool)> rec = [&](int i, int left, bool hit) {
      if (out.size() >= cap) return;
      if (i == m - 1) {
        if (left >= 1 && left <= mx && (hit || left == mx)) {
          cur[i] = left;
          out.push_back(cur);
        }
        return;
      }
      const int rest = m - 1 - i;
      for (int v = 1; v <= mx; ++v) {
        const int after = left - v;
        if (after < rest || after > rest * mx) continue;
        cur[i] = v;
        rec(i + 1, after, hit || v == mx);
      }
    };
    rec(0, total, false);
  }
  return out;
}

std::vector<ExactColumn> filterInterpolating(const std::vector<ExactColumn>& basis,
                                             const Evaluator& ev, std::size_t from) {
  std::vector<ExactColumn> kept;
  std::vector<std::pair<std::size_t, std::size_t>> failing;  // column, condition
  for (std::size_t i = 0; i < basis.size(); ++i) {
    auto f = ev.firstFailure(basis[i], from);
    if (!f) {
      kept.push_back(basis[i]);
    } else {
      failing.emplace_back(i, *f);
    }
  }
  if (!kept.empty()) return kept;
  for (std::size_t x = 0; x < failing.size(); ++x) {
    for (std::size_t y = x + 1; y < failing.size(); ++y) {
      const ExactColumn& a = basis[failing[x].first];
      const ExactColumn& b = basis[failing[y].first];
      const std::size_t k = std::min(failing[x].second, failing[y].second);
      RatFun ra = ev.residual(a, k), rb = ev.residual(b, k);
      if (ra.isZero() || rb.isZero()) continue;
      ExactColumn c(a.size());
      for (std::size_t l = 0; l < a.size(); ++l) {
        c[l].resize(std::max(a[l].size(), b[l].size()));
        for (std::size_t d = 0; d < c[l].size(); ++d) {
          RatFun va = d < a[l].size() ? a[l][d] : RatFun();
          RatFun vb = d < b[l].size() ? b[l][d] : RatFun();
          c[l][d] = rb * va - ra * vb;
        }
        trimPoly(c[l]);
      }
      if (std::all_of(c.begin(), c.end(), isZeroPoly)) continue;
      if (!ev.firstFailure(c, from)) kept.push_back(std::move(c));
    }
  }
  return kept;
}

ExactColumn normalizeOutput(ExactColumn col, const std::vector<int>& bounds) {
  PolyQ den(1);
  bool any = false;
  for (auto& p : col) {
    trimPoly(p);
    for (const auto& c : p) {
      if (c.isZero()) continue;
      any = true;
      den = polyLcm(den, c.den());
    }
  }
  if (!any) return col;
  std::vector<std::vector<PolyQ>> nums(col.size());
  PolyQ g;
  for (std::size_t l = 0; l < col.size(); ++l) {
    for (const auto& c : col[l]) {
      PolyQ v = c.isZero() ? PolyQ() : c.num() * polyDiv(den, c.den());
      g = PolyQ::gcd(g, v);
      nums[l].push_back(std::move(v));
    }
  }
  mpz_class dl = 1, content = 0;
  for (auto& row : nums) {
    for (auto& v : row) {
      if (v.isZero()) continue;
      v = polyDiv(v, g);
      for (const auto& c : v.coeffs()) {
        mpz_lcm(dl.get_mpz_t(), dl.get_mpz_t(), c.get_den().get_mpz_t());
      }
    }
  }
  for (auto& row : nums) {
    for (auto& v : row) {
      v *= mpq_class(dl);
      for (const auto& c : v.coeffs()) {
        mpz_gcd(content.get_mpz_t(), content.get_mpz_t(), c.get_num().get_mpz_t());
      }
    }
  }
  // critical index: smallest component attaining min(bound - degree)
  std::size_t crit = 0;
  long best = 0;
  bool found = false;
  for (std::size_t l = 0; l < col.size(); ++l) {
    if (col[l].empty()) continue;
    const long defect = bounds[l] - static_cast<long>(col[l].size() - 1);
    if (!found || defect < best) {
      best = defect;
      crit = l;
      found = true;
    }
  }
  mpq_class scale(1, content);
  if (nums[crit].back().lead() < 0) scale = -scale;
  for (std::size_t l = 0; l < col.size(); ++l) {
    for (std::size_t d = 0; d < col[l].size(); ++d) col[l][d] = RatFun(nums[l][d] * scale);
  }
  return col;
}

std::vector<RatFun> initialConditions(const GuessResult& r, const std::vector<RatFun>& terms) {
  std::vector<RatFun> out;
  const GuessClass cls = r.cls;
  if (cls == GuessClass::Rat || cls == GuessClass::Pade) return out;
  int order = 0;
  for (std::size_t l = 0; l < r.equation.size(); ++l) {
    if (isZeroPoly(r.equation[l]) || r.schema.monomials[l].parts.empty()) continue;
    order = std::max(order, r.schema.monomials[l].parts.front() - 1);
  }
  std::size_t count = 0;
  switch (r.schema.interp) {
    case Interpretation::Shift:
      count = static_cast<std::size_t>(order);
      break;
    case Interpretation::Mahler:
    case Interpretation::QDilation:
      count = 5;
      break;
    case Interpretation::Derivative: {
      count = static_cast<std::size_t>(std::max(order, 1));
      if (order >= 1) {
        bool singular = true;
        for (std::size_t l = 0; l < r.equation.size(); ++l) {
          const auto& parts = r.schema.monomials[l].parts;
          if (isZeroPoly(r.equation[l]) || parts.empty() || parts.front() - 1 != order) continue;
          if (!r.equation[l][0].isZero()) singular = false;
        }
        if (singular) ++count;
      }
      break;
    }
  }
  count = std::min(count, terms.size());
  mpz_class fac = 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) fac *= static_cast<unsigned long>(k);
    if (r.schema.interp == Interpretation::Derivative) {
      out.push_back(terms[k] * RatFun(mpq_class(fac)));
    } else {
      out.push_back(terms[k]);
    }
  }
  return out;
}

namespace {

std::size_t maxBoundOf(const std::vector<int>& b) {
  return b.empty() ? 0 : static_cast<std::size_t>(*std::max_element(b.begin(), b.end()));
}

}  // namespace

bool checkDeterministic(const GuessResult& r, const std::vector<RatFun>& terms) {
  Evaluator ev(terms, r.schema, maxBoundOf(r.bounds));
  return !ev.firstFailure(r.equation, 0, r.conditionLimit);
}

bool checkMonteCarlo(const GuessResult& r, const std::vector<RatFun>& terms, int trials,
                     std::uint64_t seed) {
  Evaluator ev(terms, r.schema, maxBoundOf(r.bounds));
  const std::size_t end = std::min(ev.checkable(r.equation), r.conditionLimit);
  const bool series = isSeriesClass(r.schema.cls);
  PrimeSource primes(seed ^ 0x5eed5eedULL);
  std::mt19937_64 rng(seed);
  int done = 0, attempts = 0;
  while (done < trials) {
    if (++attempts > 100 * trials + 100) return false;
    ModPrime f = primes.next();
    const Residue t = std::uniform_int_distribution<Residue>(1, f.value() - 1)(rng);
    auto red = [&](const RatFun& v) { return evalRatioAt(reducePolyScalar(v, f), t, f); };
    try {
      std::vector<ModPoly> eq;
      for (const auto& p : r.equation) {
        ModPoly m;
        for (const auto& c : p) m.push_back(red(c));
        eq.push_back(std::move(m));
      }
      std::vector<std::vector<Residue>> streams;
      for (std::size_t l = 0; l < r.schema.m(); ++l) {
        std::vector<Residue> s;
        for (const auto& v : ev.stream(l)) s.push_back(red(v));
        streams.push_back(std::move(s));
      }
      for (std::size_t k = 0; k < end; ++k) {
        Residue acc = 0;
        if (series) {
          for (std::size_t l = 0; l < eq.size(); ++l) {
            for (std::size_t d = 0; d < eq[l].size() && d <= k; ++d) {
              if (k - d >= streams[l].size()) continue;
              acc = f.add(acc, f.mul(eq[l][d], streams[l][k - d]));
            }
          }
        } else {
          const Residue x = red(ev.point(k));
          for (std::size_t l = 0; l < eq.size(); ++l) {
            if (eq[l].empty()) continue;
            acc = f.add(acc, f.mul(evalPolyAt(eq[l], x, f), streams[l].at(k)));
          }
        }
        if (acc != 0) return false;
      }
    } catch (const BadModulus&) {
      continue;
    }
    ++done;
  }
  return true;
}

namespace {

struct Attempt {
  std::vector<GuessResult> results;
  bool checkFailed = false;
};

Attempt solveOne(const std::vector<RatFun>& terms, const GuessProblem& pr, const Evaluator& ev,
                 const GuessOptions& opts, std::uint64_t seed) {
  Attempt at;
  LiftOptions lo;
  lo.seed = seed;
  lo.threads = opts.threads;
  lo.debug = opts.debug;
  LiftResult lr = doSolve(pr, lo);
  if (lr.status == LiftResult::Status::NoSolution) return at;
  std::vector<ExactColumn> cols = lr.basis;
  std::size_t limit = kUnbounded;
  if (opts.checkExtraValues) {
    cols = filterInterpolating(cols, ev, pr.sigma);
  } else {
    limit = pr.sigma;
  }
  if (pr.schema.cls == GuessClass::FE) {
    // purely algebraic relations are left to the alg guesser
    std::erase_if(cols, [&](const ExactColumn& c) {
      for (std::size_t l = 0; l < c.size(); ++l) {
        const auto& parts = pr.schema.monomials[l].parts;
        if (!isZeroPoly(c[l]) && !parts.empty() && parts.front() >= 2) return false;
      }
      return true;
    });
  }
  if (pr.schema.cls == GuessClass::Rat || pr.schema.cls == GuessClass::Pade) {
    // the closed form -p0/p1 has to be defined on the data
    std::erase_if(cols, [&](const ExactColumn& c) {
      if (isZeroPoly(c[1])) return true;
      if (pr.schema.cls == GuessClass::Pade) return c[1][0].isZero();
      for (std::size_t k = 0; k < terms.size(); ++k) {
        if (evalPoly(c[1], ev.point(k)).isZero()) return true;
      }
      return false;
    });
  }
  for (auto& c : cols) {
    GuessResult r;
    r.cls = pr.schema.cls;
    r.schema = pr.schema;
    r.bounds = pr.bounds;
    r.equation = normalizeOutput(std::move(c), pr.bounds);
    r.conditionLimit = limit;
    r.names = opts.names;
    switch (opts.check) {
      case CheckMode::Deterministic:
        if (ev.firstFailure(r.equation, 0, limit)) {
          at.checkFailed = true;
          return at;
        }
        r.check = CheckStatus::Verified;
        break;
      case CheckMode::MonteCarlo:
        if (!checkMonteCarlo(r, terms, opts.monteCarloTrials, seed)) {
          at.checkFailed = true;
          return at;
        }
        r.check = CheckStatus::Probable;
        break;
      case CheckMode::Skip:
        r.check = CheckStatus::Unchecked;
        break;
    }
    r.initial = initialConditions(r, terms);
    at.results.push_back(std::move(r));
  }
  return at;
}

// Equal nonzero terms, whatever schema size produced them.
bool sameEquation(const GuessResult& a, const GuessResult& b) {
  auto terms = [](const GuessResult& r) {
    std::vector<std::pair<Monomial, ExactPoly>> t;
    for (std::size_t l = 0; l < r.equation.size(); ++l) {
      ExactPoly p = r.equation[l];
      trimPoly(p);
      if (!p.empty()) t.emplace_back(r.schema.monomials[l], std::move(p));
    }
    return t;
  };
  auto ta = terms(a), tb = terms(b);
  if (ta.size() != tb.size()) return false;
  return std::all_of(ta.begin(), ta.end(), [&](const auto& x) {
    return std::find(tb.begin(), tb.end(), x) != tb.end();
  });
}

std::vector<GuessResult> guessOnce(const std::vector<RatFun>& terms, GuessClass cls,
                                   const GuessOptions& opts) {
  SchemaOptions so;
  so.maxOrder = opts.maxOrder;
  so.maxPower = opts.maxPower;
  so.homogeneous = opts.homogeneous;
  so.somos = opts.somos;
  so.maxMixedDegree = opts.maxMixedDegree;
  so.q = opts.q;
  const bool all = opts.allDegrees.value_or(cls == GuessClass::Rat || cls == GuessClass::Pade);
  const std::size_t n = terms.size();
  std::vector<GuessResult> out;
  for (std::size_t m = 2;; ++m) {
    Schema schema;
    try {
      schema = buildSchema(cls, so, m);
    } catch (const SchemaExhausted&) {
      break;
    }
    const std::size_t loss = static_cast<std::size_t>(schema.conditionLoss());
    if (n <= loss) break;
    const std::size_t sigma = n - loss;
    const long total = static_cast<long>(sigma) + 1 - opts.safety;
    if (total < static_cast<long>(m)) {
      log(opts, "m=" + std::to_string(m) + ": insufficient data");
      break;
    }
    auto vectors = enumerateDegreeVectors(static_cast<int>(total), static_cast<int>(m), all,
                                          opts.maxDegree);
    log(opts, "m=" + std::to_string(m) + " sigma=" + std::to_string(sigma) + " vectors=" +
                  std::to_string(vectors.size()));
    if (vectors.empty()) continue;
    std::optional<Evaluator> ev;
    for (const auto& bounds : vectors) {
      log(opts, "degree vector " + vecString(bounds));
      GuessProblem pr;
      pr.terms = terms;
      pr.schema = schema;
      pr.bounds = bounds;
      pr.sigma = sigma;
      if (!ev) ev.emplace(terms, schema, static_cast<std::size_t>(total));
      Attempt at = solveOne(terms, pr, *ev, opts, opts.seed);
      if (at.checkFailed) {
        log(opts, "check failed, retrying with fresh primes");
        at = solveOne(terms, pr, *ev, opts, opts.seed + 0x9e3779b97f4a7c15ULL);
        if (at.checkFailed) {
          throw CheckFailed("reconstructed equation failed its check for degree vector " +
                            vecString(bounds));
        }
      }
      for (auto& r : at.results) {
        bool dup = std::any_of(out.begin(), out.end(),
                               [&](const GuessResult& o) { return sameEquation(o, r); });
        if (!dup) out.push_back(std::move(r));
      }
      if (opts.one && !out.empty()) return out;
    }
  }
  return out;
}

}  // namespace

std::vector<GuessResult> guess(const std::vector<RatFun>& terms, GuessClass cls,
                               const GuessOptions& opts) {
  if (terms.size() < 2) throw UsageError("at least two terms are required");
  if (opts.safety < 0) throw UsageError("safety must be nonnegative");
  if (opts.maxMixedDegree > 0 && !opts.q) throw UsageError("mixed degree requires q mode");
  if (opts.somos != -1) return guessOnce(terms, cls, opts);
  const int power = opts.homogeneous > 0 ? opts.homogeneous : opts.maxPower.value_or(0);
  if (!opts.maxOrder || power <= 0) {
    throw UsageError("somos=true needs a maximal order and a power or homogeneous degree");
  }
  std::vector<GuessResult> out;
  for (int s = 2; s <= *opts.maxOrder * power; ++s) {
    GuessOptions sub = opts;
    sub.somos = s;
    for (auto& r : guessOnce(terms, cls, sub)) {
      bool dup = std::any_of(out.begin(), out.end(),
                             [&](const GuessResult& o) { return sameEquation(o, r); });
      if (!dup) out.push_back(std::move(r));
    }
    if (opts.one && !out.empty()) break;
  }
  return out;
}

std::pair<ExactPoly, ExactPoly> ratClosedForm(const GuessResult& r) {
  if (r.equation.size() != 2) throw UsageError("ratClosedForm: not a rational equation");
  ExactPoly num = r.equation[0], den = r.equation[1];
  for (auto& c : num) c = -c;
  trimPoly(num);
  trimPoly(den);
  if (den.empty()) throw UsageError("ratClosedForm: vanishing denominator");
  if (den.back().num().lead() < 0) {
    for (auto& c : num) c = -c;
    for (auto& c : den) c = -c;
  }
  return {num, den};
}

namespace {

void searchOps(const std::vector<RatFun>& terms, const std::vector<GuessClass>& base, Operators ops,
               const GuessOptions& opts, int level, std::vector<OperatorExpr>& out) {
  for (GuessClass c : base) {
    std::vector<GuessResult> rs;
    try {
      rs = guess(terms, c, opts);
    } catch (const UsageError&) {
      continue;
    }
    for (auto& r : rs) {
      OperatorExpr e;
      e.leaf = std::move(r);
      out.push_back(std::move(e));
    }
    if (opts.one && !out.empty()) return;
  }
  if (!out.empty() && opts.one) return;
  if (opts.maxLevel && level >= *opts.maxLevel) return;
  if (terms.size() < 3) return;
  if (ops.sum) {
    std::vector<RatFun> d;
    for (std::size_t i = 0; i + 1 < terms.size(); ++i) d.push_back(terms[i + 1] - terms[i]);
    std::vector<OperatorExpr> sub;
    log(opts, "level " + std::to_string(level + 1) + ": differences");
    searchOps(d, base, ops, opts, level + 1, sub);
    for (auto& s : sub) {
      OperatorExpr e;
      e.kind = OperatorExpr::Kind::Sum;
      e.child = std::make_shared<OperatorExpr>(std::move(s));
      e.start = terms[0];
      out.push_back(std::move(e));
    }
    if (opts.one && !out.empty()) return;
  }
  if (ops.product) {
    std::size_t z = 0;
    while (z < terms.size() && terms[z].isZero()) ++z;
    std::vector<RatFun> h(terms.begin() + static_cast<long>(z), terms.end());
    const bool interiorZero =
        std::any_of(h.begin(), h.end(), [](const RatFun& v) { return v.isZero(); });
    if (!interiorZero && h.size() >= 3) {
      std::vector<RatFun> qs;
      for (std::size_t i = 0; i + 1 < h.size(); ++i) qs.push_back(h[i + 1] / h[i]);
      std::vector<OperatorExpr> sub;
      log(opts, "level " + std::to_string(level + 1) + ": quotients");
      searchOps(qs, base, ops, opts, level + 1, sub);
      for (auto& s : sub) {
        OperatorExpr e;
        e.kind = OperatorExpr::Kind::Product;
        e.child = std::make_shared<OperatorExpr>(std::move(s));
        e.start = h[0];
        e.offset = z;
        out.push_back(std::move(e));
      }
    }
  }
}

}  // namespace

std::vector<OperatorExpr> guessWithOperators(const std::vector<RatFun>& terms,
                                             const std::vector<GuessClass>& base, Operators ops,
                                             const GuessOptions& opts) {
  if (terms.empty()) throw UsageError("no terms given");
  std::vector<OperatorExpr> out;
  searchOps(terms, base, ops, opts, 0, out);
  return out;
}

std::optional<RatFun> evaluate(const OperatorExpr& e, std::size_t n) {
  switch (e.kind) {
    case OperatorExpr::Kind::Leaf: {
      if (e.leaf.cls != GuessClass::Rat) return std::nullopt;
      auto [num, den] = ratClosedForm(e.leaf);
      RatFun x = exactPoint(e.leaf.schema, n);
      RatFun d = evalPoly(den, x);
      if (d.isZero()) return std::nullopt;
      return evalPoly(num, x) / d;
    }
    case OperatorExpr::Kind::Sum: {
      RatFun acc = e.start;
      for (std::size_t s = 0; s < n; ++s) {
        auto v = evaluate(*e.child, s);
        if (!v) return std::nullopt;
        acc += *v;
      }
      return acc;
    }
    case OperatorExpr::Kind::Product: {
      if (n < e.offset) return RatFun();
      RatFun acc = e.start;
      for (std::size_t p = 0; p < n - e.offset; ++p) {
        auto v = evaluate(*e.child, p);
        if (!v) return std::nullopt;
        acc *= *v;
      }
      return acc;
    }
  }
  return std::nullopt;
}

}  // namespace seqguess
