#include "seqguess/models.hpp"

#include <algorithm>
#include <functional>
#include <set>

#include "seqguess/rings.hpp"

namespace seqguess {

std::string className(GuessClass c) {
  switch (c) {
    case GuessClass::Rat: return "rat";
    case GuessClass::Pade: return "pade";
    case GuessClass::PRec: return "prec";
    case GuessClass::Rec: return "rec";
    case GuessClass::Holo: return "holo";
    case GuessClass::Alg: return "alg";
    case GuessClass::ADE: return "ade";
    case GuessClass::FE: return "fe";
  }
  return "?";
}

std::optional<GuessClass> parseClassName(const std::string& s) {
  for (GuessClass c : {GuessClass::Rat, GuessClass::Pade, GuessClass::PRec, GuessClass::Rec,
                       GuessClass::Holo, GuessClass::Alg, GuessClass::ADE, GuessClass::FE}) {
    if (className(c) == s) return c;
  }
  return std::nullopt;
}

bool isSeriesClass(GuessClass c) {
  switch (c) {
    case GuessClass::Rat:
    case GuessClass::PRec:
    case GuessClass::Rec:
      return false;
    default:
      return true;
  }
}

Interpretation interpretationOf(GuessClass c, bool q) {
  if (c == GuessClass::FE) return Interpretation::Mahler;
  if (!isSeriesClass(c)) return Interpretation::Shift;
  return q ? Interpretation::QDilation : Interpretation::Derivative;
}

int Schema::conditionLoss() const {
  if (interp == Interpretation::QDilation || interp == Interpretation::Mahler) return 0;
  int loss = 0;
  for (const auto& mono : monomials) {
    if (!mono.parts.empty()) loss = std::max(loss, mono.parts.front() - 1);
  }
  return loss;
}

bool Schema::mixedMode() const {
  return std::any_of(monomials.begin(), monomials.end(),
                     [](const Monomial& mo) { return mo.mixed > 0; });
}

namespace {

constexpr int kCachedWeight = 40;

// Partitions of each weight w, sorted lexicographically; computed once.
const std::vector<std::vector<std::vector<int>>>& partitionLevels() {
  static const auto levels = [] {
    std::vector<std::vector<std::vector<int>>> out(kCachedWeight + 1);
    std::vector<int> cur;
    std::function<void(int, int, std::vector<std::vector<int>>&)> rec =
        [&](int remaining, int maxPart, std::vector<std::vector<int>>& acc) {
          if (remaining == 0) {
            acc.push_back(cur);
            return;
          }
          for (int p = std::min(remaining, maxPart); p >= 1; --p) {
            cur.push_back(p);
            rec(remaining - p, p, acc);
            cur.pop_back();
          }
        };
    for (int w = 0; w <= kCachedWeight; ++w) {
      rec(w, w, out[w]);
      std::sort(out[w].begin(), out[w].end());
    }
    return out;
  }();
  return levels;
}

}  // namespace

std::vector<std::vector<int>> partitionsLex(int maxWeight) {
  if (maxWeight > kCachedWeight) throw UsageError("partition weight too large");
  std::vector<std::vector<int>> out;
  for (int w = 0; w <= maxWeight; ++w) {
    const auto& level = partitionLevels()[w];
    out.insert(out.end(), level.begin(), level.end());
  }
  return out;
}

namespace {

bool admitted(GuessClass cls, const SchemaOptions& o, const std::vector<int>& parts) {
  const int count = static_cast<int>(parts.size());
  const int top = parts.empty() ? 0 : parts.front();
  switch (cls) {
    case GuessClass::Rat:
    case GuessClass::Pade:
      if (count > 1 || top > 1) return false;
      break;
    case GuessClass::PRec:
    case GuessClass::Holo:
      if (count > 1) return false;
      break;
    case GuessClass::Alg:
      if (top > 1) return false;
      break;
    default:
      break;
  }
  if (o.maxOrder && top > *o.maxOrder + 1) return false;
  if (o.maxPower && count > *o.maxPower) return false;
  if (o.homogeneous > 0 && count != o.homogeneous) return false;
  if (o.homogeneous < 0 && count == 0) return false;
  if (o.somos > 0) {
    int s = 0;
    for (int p : parts) s += p - 1;
    if (s != o.somos) return false;
  }
  return true;
}

}  // namespace

Schema buildSchema(GuessClass cls, const SchemaOptions& opts, std::size_t m, int maxWeight) {
  if (opts.maxMixedDegree < 0) throw UsageError("maxMixedDegree must be non-negative");
  if (opts.maxMixedDegree > 0 && (isSeriesClass(cls) || !opts.q)) {
    throw UsageError("mixed degrees apply to q-recurrences only");
  }
  Schema s;
  s.cls = cls;
  s.q = opts.q;
  s.interp = interpretationOf(cls, opts.q);
  // Rational and Pade classes only ever use [1, f].
  const int weightCap =
      (cls == GuessClass::Rat || cls == GuessClass::Pade) ? std::min(maxWeight, 1) : maxWeight;
  for (int w = 0; w <= std::min(weightCap, kCachedWeight); ++w) {
    for (const auto& parts : partitionLevels()[w]) {
      if (!admitted(cls, opts, parts)) continue;
      for (int j = 0; j <= opts.maxMixedDegree; ++j) {
        if (s.monomials.size() == m) return s;
        s.monomials.push_back(Monomial{parts, j});
      }
    }
  }
  if (s.monomials.size() == m) return s;
  throw SchemaExhausted("only " + std::to_string(s.monomials.size()) +
                        " monomials available, " + std::to_string(m) + " requested");
}

std::size_t knownLength(const Monomial& mono, Interpretation interp, std::size_t terms) {
  if (mono.parts.empty()) return kUnbounded;
  const std::size_t top = mono.parts.front();
  const std::size_t low = mono.parts.back();
  switch (interp) {
    case Interpretation::Shift:
    case Interpretation::Derivative:
      return terms >= top - 1 ? terms - (top - 1) : 0;
    case Interpretation::QDilation:
      return terms;
    case Interpretation::Mahler:
      return low * terms;
  }
  return 0;
}

CauchyPlan cauchyPlan(const Schema& schema) {
  CauchyPlan plan;
  std::set<std::vector<int>> have;
  std::function<void(const std::vector<int>&)> ensure = [&](const std::vector<int>& parts) {
    if (parts.size() < 2 || have.count(parts)) return;
    std::vector<int> tail(parts.begin() + 1, parts.end());
    ensure(tail);
    plan.steps.push_back({parts, tail, parts.front()});
    have.insert(parts);
  };
  for (const auto& mono : schema.monomials) ensure(mono.parts);
  return plan;
}

std::size_t naiveProductCount(const Schema& schema) {
  std::set<std::vector<int>> seen;
  std::size_t n = 0;
  for (const auto& mono : schema.monomials) {
    if (!seen.insert(mono.parts).second) continue;
    if (mono.parts.size() > 1) n += mono.parts.size() - 1;
  }
  return n;
}

namespace {

std::vector<Residue> baseSeries(const std::vector<Residue>& t, Interpretation interp, int part,
                                std::size_t len, const ModPrime& f,
                                std::optional<Residue> qPoint) {
  std::vector<Residue> b(len, 0);
  const std::size_t r = static_cast<std::size_t>(part - 1);
  switch (interp) {
    case Interpretation::Derivative:
      for (std::size_t k = 0; k < len; ++k) {
        if (k + r >= t.size()) throw UsageError("not enough terms for derivative stream");
        Residue v = t[k + r];
        for (std::size_t i = 1; i <= r; ++i) v = f.mul(v, f.fromUnsigned(k + i));
        b[k] = v;
      }
      break;
    case Interpretation::QDilation: {
      if (!qPoint) throw UsageError("q-dilation needs a value for q");
      const Residue step = f.pow(*qPoint, r);
      Residue w = 1;
      for (std::size_t k = 0; k < len; ++k) {
        if (k >= t.size()) throw UsageError("not enough terms for q-dilation stream");
        b[k] = f.mul(t[k], w);
        w = f.mul(w, step);
      }
      break;
    }
    case Interpretation::Mahler:
      for (std::size_t k = 0; k < len; k += part) {
        if (k / part >= t.size()) throw UsageError("not enough terms for Mahler stream");
        b[k] = t[k / part];
      }
      break;
    case Interpretation::Shift:
      throw UsageError("baseSeries called for a sequence schema");
  }
  return b;
}

}  // namespace

OrderProblem buildImages(const std::vector<Residue>& terms, const Schema& schema,
                         const std::vector<int>& bounds, std::size_t sigma, const ModPrime& f,
                         std::optional<Residue> qPoint) {
  OrderProblem pr;
  pr.sigma = sigma;
  pr.bounds = bounds;
  const std::size_t m = schema.m();
  if (bounds.size() != m) throw UsageError("buildImages: bounds do not match schema");
  if (schema.q && !qPoint) throw UsageError("buildImages: q-schema needs a value for q");
  const bool mixed = schema.mixedMode();

  if (schema.interp == Interpretation::Shift) {
    pr.kind = PointKind::Distinct;
    pr.points.resize(sigma);
    Residue qk = 1;
    for (std::size_t k = 0; k < sigma; ++k) {
      if (schema.q && !mixed) {
        pr.points[k] = qk;
        qk = f.mul(qk, *qPoint);
      } else {
        pr.points[k] = f.fromUnsigned(k);
      }
    }
    for (const auto& mono : schema.monomials) {
      std::vector<Residue> s(sigma, 1);
      for (int part : mono.parts) {
        for (std::size_t k = 0; k < sigma; ++k) {
          std::size_t idx = k + static_cast<std::size_t>(part) - 1;
          if (idx >= terms.size()) throw UsageError("buildImages: not enough terms");
          s[k] = f.mul(s[k], terms[idx]);
        }
      }
      if (mono.mixed > 0) {
        const Residue step = f.pow(*qPoint, static_cast<std::uint64_t>(mono.mixed));
        Residue w = 1;
        for (std::size_t k = 0; k < sigma; ++k) {
          s[k] = f.mul(s[k], w);
          w = f.mul(w, step);
        }
      }
      pr.streams.push_back(std::move(s));
    }
    return pr;
  }

  pr.kind = PointKind::Confluent;
  std::map<std::vector<int>, std::vector<Residue>> cache;
  std::map<int, std::vector<Residue>> base;
  auto baseOf = [&](int part) -> const std::vector<Residue>& {
    auto it = base.find(part);
    if (it == base.end()) {
      it = base.emplace(part, baseSeries(terms, schema.interp, part, sigma, f, qPoint)).first;
    }
    return it->second;
  };
  for (const auto& mono : schema.monomials) {
    if (mono.parts.size() == 1) cache[mono.parts] = baseOf(mono.parts.front());
  }
  for (const auto& step : cauchyPlan(schema).steps) {
    const std::vector<Residue>& tail =
        step.tail.size() == 1 ? baseOf(step.tail.front()) : cache.at(step.tail);
    cache[step.target] = cauchyMulTrunc(tail, baseOf(step.factor), sigma, f);
  }
  for (const auto& mono : schema.monomials) {
    if (mono.parts.empty()) {
      std::vector<Residue> one(sigma, 0);
      if (sigma > 0) one[0] = 1;
      pr.streams.push_back(std::move(one));
    } else {
      pr.streams.push_back(cache.at(mono.parts));
    }
  }
  return pr;
}

RatFun exactPoint(const Schema& schema, std::size_t k) {
  if (schema.q && !schema.mixedMode()) return RatFun::parameter().pow(static_cast<unsigned>(k));
  return RatFun(mpq_class(static_cast<unsigned long>(k)));
}

namespace {

std::vector<RatFun> exactBase(const std::vector<RatFun>& t, Interpretation interp, int part,
                              std::size_t len) {
  std::vector<RatFun> b(len);
  const std::size_t r = static_cast<std::size_t>(part - 1);
  switch (interp) {
    case Interpretation::Derivative:
      for (std::size_t k = 0; k < len; ++k) {
        mpz_class fac = 1;
        for (std::size_t i = 1; i <= r; ++i) fac *= static_cast<unsigned long>(k + i);
        b[k] = t.at(k + r) * RatFun(mpq_class(fac));
      }
      break;
    case Interpretation::QDilation: {
      RatFun step = RatFun::parameter().pow(static_cast<unsigned>(r)), w(1);
      for (std::size_t k = 0; k < len; ++k) {
        b[k] = t.at(k) * w;
        w *= step;
      }
      break;
    }
    case Interpretation::Mahler:
      for (std::size_t k = 0; k < len; k += part) b[k] = t.at(k / part);
      break;
    case Interpretation::Shift:
      break;
  }
  return b;
}

std::vector<RatFun> exactMul(const std::vector<RatFun>& a, const std::vector<RatFun>& b,
                             std::size_t len) {
  std::vector<RatFun> r(len);
  for (std::size_t i = 0; i < len && i < a.size(); ++i) {
    if (a[i].isZero()) continue;
    for (std::size_t j = 0; i + j < len && j < b.size(); ++j) {
      if (b[j].isZero()) continue;
      r[i + j] += a[i] * b[j];
    }
  }
  return r;
}

}  // namespace

std::vector<RatFun> exactStream(const std::vector<RatFun>& terms, const Schema& schema,
                                std::size_t index, std::size_t length) {
  const Monomial& mono = schema.monomials.at(index);
  if (length > knownLength(mono, schema.interp, terms.size())) {
    throw UsageError("exactStream: requested entries are not determined by the data");
  }
  if (schema.interp == Interpretation::Shift) {
    std::vector<RatFun> s(length, RatFun(1));
    for (std::size_t k = 0; k < length; ++k) {
      for (int part : mono.parts) s[k] *= terms[k + part - 1];
      if (mono.mixed > 0) {
        s[k] *= RatFun::parameter().pow(static_cast<unsigned>(mono.mixed * k));
      }
    }
    return s;
  }
  if (mono.parts.empty()) {
    std::vector<RatFun> one(length);
    if (length > 0) one[0] = RatFun(1);
    return one;
  }
  std::vector<RatFun> acc = exactBase(terms, schema.interp, mono.parts.back(), length);
  for (std::size_t i = mono.parts.size() - 1; i-- > 0;) {
    acc = exactMul(acc, exactBase(terms, schema.interp, mono.parts[i], length), length);
  }
  return acc;
}

}  // namespace seqguess
