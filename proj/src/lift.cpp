#include "seqguess/lift.hpp"

#include <algorithm>
#include <future>
#include <random>
#include <set>
#include <sstream>

#include "seqguess/rings.hpp"

namespace seqguess {

bool GuessProblem::parametric() const {
  if (schema.q) return true;
  return std::any_of(terms.begin(), terms.end(), [](const RatFun& t) { return !t.isRational(); });
}

Classification checkReduction(const ReductionRecord& fresh,
                              const std::optional<ReductionRecord>& state) {
  if (!state) return Classification::Good;
  switch (compareReductions(fresh, *state)) {
    case Comparison::Equal: return Classification::Good;
    case Comparison::Better: return Classification::AllBad;
    default: return Classification::Bad;
  }
}

bool reconstructionDue(std::size_t count, const LiftOptions& opts) {
  if (count == 0) return false;
  if (count <= opts.reconThreshold) return true;
  return count % opts.reconStep == 0;
}

bool pointReconstructionDue(std::size_t points) {
  if (points == 0) return false;
  std::size_t r = 1;
  while (r * r < points) ++r;
  return r * r == points;
}

ReductionRecord solutionRecord(const SigmaBasis& sol, std::size_t m) {
  ReductionRecord r = reductionRecord(sol);
  while (r.defects.size() < m) {
    r.defects.push_back(0);
    r.criticalIndices.push_back(0);
    r.leadingExponents.push_back(0);
  }
  return r;
}

SigmaBasis solveModular(const OrderProblem& problem, const ModPrime& field, TieBreak tie) {
  SigmaBasis full = sigmaBasis(problem, field, tie);
  SigmaBasis sol;
  sol.bounds = full.bounds;
  for (std::size_t r = 0; r < full.columns.size(); ++r) {
    if (full.defects[r] >= 1) {
      sol.columns.push_back(std::move(full.columns[r]));
      sol.defects.push_back(full.defects[r]);
    }
  }
  return normalizeBasis(sol, field);
}

PolyVec reduceColumn(const ExactColumn& col, const ModPrime& field) {
  PolyVec out;
  for (const auto& comp : col) {
    ModPoly p;
    for (const auto& c : comp) {
      if (!c.isRational()) throw UsageError("reduceColumn: parametric coefficient");
      p.push_back(reduceScalar(c.rational(), field));
    }
    trim(p);
    out.push_back(std::move(p));
  }
  return out;
}

namespace {

std::size_t flatWidth(const std::vector<int>& bounds) {
  std::size_t w = 0;
  for (int b : bounds) w += static_cast<std::size_t>(b);
  return w;
}

std::vector<Residue> flatten(const SigmaBasis& b) {
  std::vector<Residue> out;
  out.reserve(b.columns.size() * flatWidth(b.bounds));
  for (const auto& col : b.columns) {
    for (std::size_t l = 0; l < col.size(); ++l) {
      for (int d = 0; d < b.bounds[l]; ++d) {
        out.push_back(static_cast<std::size_t>(d) < col[l].size() ? col[l][d] : 0);
      }
    }
  }
  return out;
}

template <typename T, typename Make>
std::vector<ExactColumn> unflatten(const std::vector<T>& flat, const std::vector<int>& bounds,
                                   Make make) {
  const std::size_t width = flatWidth(bounds);
  std::vector<ExactColumn> cols;
  for (std::size_t base = 0; base + width <= flat.size(); base += width) {
    ExactColumn col;
    std::size_t pos = base;
    for (int b : bounds) {
      ExactPoly poly;
      for (int d = 0; d < b; ++d) poly.push_back(make(flat[pos++]));
      while (!poly.empty() && poly.back().isZero()) poly.pop_back();
      col.push_back(std::move(poly));
    }
    cols.push_back(std::move(col));
  }
  return cols;
}

struct LeafImage {
  ReductionRecord record;
  SigmaBasis basis;
};

LeafImage leafImage(const GuessProblem& pr, const std::vector<Residue>& terms,
                    const ModPrime& f, std::optional<Residue> q, TieBreak tie) {
  OrderProblem op = buildImages(terms, pr.schema, pr.bounds, pr.sigma, f, q);
  LeafImage img;
  img.basis = solveModular(op, f, tie);
  img.record = solutionRecord(img.basis, pr.schema.m());
  return img;
}

int degreeOf(const ModPoly& p) { return degree(p); }

struct PrimeOutcome {
  enum class Kind { Skipped, NoSolution, Failed, Image };
  Kind kind = Kind::Skipped;
  ModPrime prime;
  ReductionRecord record;
  std::vector<Residue> flat;     // rational level
  std::vector<ModRatio> coeffs;  // parametric level
  std::size_t innerPoints = 0;
};

std::size_t innerPointCap(const GuessProblem& pr, const LiftOptions& opts) {
  if (opts.maxInnerPoints > 0) return opts.maxInnerPoints;
  std::size_t termDeg = 0;
  for (const auto& t : pr.terms) {
    termDeg = std::max<std::size_t>(termDeg, std::max(t.num().degree(), 0) +
                                                 std::max(t.den().degree(), 0));
  }
  std::size_t parts = 1, topPart = 1, mixed = 0;
  for (const auto& mono : pr.schema.monomials) {
    parts = std::max(parts, mono.parts.size());
    if (!mono.parts.empty()) topPart = std::max<std::size_t>(topPart, mono.parts.front());
    mixed = std::max<std::size_t>(mixed, mono.mixed);
  }
  const std::size_t maxBound = *std::max_element(pr.bounds.begin(), pr.bounds.end());
  std::size_t qDeg = 0;
  if (pr.schema.q) {
    qDeg = pr.sigma * (maxBound + mixed + parts * (topPart - 1));
  }
  const std::size_t entry = termDeg * parts + qDeg;
  const std::size_t bound = flatWidth(pr.bounds) * entry;
  return std::clamp<std::size_t>(4 * (bound + 1), 64, 100000);
}

// Solves over Z_p(t) by interpolation in t.
PrimeOutcome innerSolve(const GuessProblem& pr, const std::vector<ModRatio>& terms,
                        const ModPrime& f, const LiftOptions& opts) {
  PrimeOutcome out;
  out.prime = f;
  std::seed_seq seq{static_cast<std::uint32_t>(opts.seed), static_cast<std::uint32_t>(opts.seed >> 32),
                    f.value()};
  std::mt19937_64 rng(seq);
  std::uniform_int_distribution<Residue> draw(1, f.value() - 1);
  const std::size_t cap = innerPointCap(pr, opts);
  std::set<Residue> used;
  std::optional<ReductionRecord> rec;
  std::vector<NewtonInterpolator> interp;
  std::optional<std::vector<ModRatio>> candidate;
  std::size_t good = 0, bad = 0, attempts = 0;
  std::vector<Residue> values(terms.size());

  while (true) {
    if (attempts >= cap) {
      throw ResourceExhausted("no stable interpolation after " + std::to_string(cap) +
                              " evaluation points modulo " + std::to_string(f.value()));
    }
    const Residue a = draw(rng);
    if (!used.insert(a).second) continue;
    ++attempts;
    LeafImage img;
    try {
      for (std::size_t i = 0; i < terms.size(); ++i) values[i] = evalRatioAt(terms[i], a, f);
      img = leafImage(pr, values, f, pr.schema.q ? std::optional<Residue>(a) : std::nullopt,
                      opts.tie);
    } catch (const BadModulus&) {
      continue;
    }
    out.innerPoints = attempts;
    if (img.basis.columns.empty()) {
      out.kind = PrimeOutcome::Kind::NoSolution;
      return out;
    }
    Classification cls = checkReduction(img.record, rec);
    if (cls == Classification::Bad) {
      ++bad;
      if (bad > good + 2) {
        out.kind = PrimeOutcome::Kind::Failed;
        return out;
      }
      continue;
    }
    std::vector<Residue> flat = flatten(img.basis);
    if (cls == Classification::AllBad || interp.empty()) {
      interp.assign(flat.size(), NewtonInterpolator(f));
      candidate.reset();
    }
    rec = img.record;
    ++good;

    if (candidate) {
      bool same = true;
      for (std::size_t i = 0; i < flat.size() && same; ++i) {
        try {
          same = evalRatioAt((*candidate)[i], a, f) == flat[i];
        } catch (const BadModulus&) {
          same = false;
        }
      }
      if (same) {
        out.kind = PrimeOutcome::Kind::Image;
        out.record = *rec;
        out.coeffs = std::move(*candidate);
        return out;
      }
      candidate.reset();
    }
    for (std::size_t i = 0; i < flat.size(); ++i) interp[i].add(a, flat[i]);
    const std::size_t pts = interp.empty() ? 0 : interp[0].points();
    if (pointReconstructionDue(pts)) {
      std::vector<ModRatio> rr;
      rr.reserve(flat.size());
      bool ok = true;
      for (std::size_t i = 0; i < flat.size() && ok; ++i) {
        auto r = polyRatRecon(interp[i], pts);
        if (!r || static_cast<std::size_t>(std::max(degreeOf(r->num), 0) + degreeOf(r->den) + 2) >
                      pts) {
          ok = false;
        } else {
          rr.push_back(std::move(*r));
        }
      }
      if (ok) candidate = std::move(rr);
    }
  }
}

using Shape = std::vector<std::pair<int, int>>;

Shape shapeOf(const std::vector<ModRatio>& coeffs) {
  Shape s;
  for (const auto& c : coeffs) s.emplace_back(degree(c.num), degree(c.den));
  return s;
}

std::vector<Residue> flattenRatios(const std::vector<ModRatio>& coeffs) {
  std::vector<Residue> out;
  for (const auto& c : coeffs) {
    out.insert(out.end(), c.num.begin(), c.num.end());
    out.insert(out.end(), c.den.begin(), c.den.end());
  }
  return out;
}

// Compares degree shapes of two images with equal records. Lower degrees
// mean the new prime lost leading terms.
Classification compareShapes(const Shape& fresh, const Shape& old) {
  bool lower = false, higher = false;
  for (std::size_t i = 0; i < fresh.size(); ++i) {
    if (fresh[i].first < old[i].first || fresh[i].second < old[i].second) lower = true;
    if (fresh[i].first > old[i].first || fresh[i].second > old[i].second) higher = true;
  }
  if (!lower && !higher) return Classification::Good;
  if (higher && !lower) return Classification::AllBad;
  return Classification::Bad;
}

class Driver {
 public:
  Driver(const GuessProblem& pr, const LiftOptions& opts)
      : pr_(pr), opts_(opts), parametric_(pr.parametric()) {}

  LiftResult run() {
    if (pr_.sigma == 0) throw UsageError("doSolve: no conditions");
    PrimeSource source(opts_.seed, 31, opts_.forcedPrimes);
    std::size_t drawn = 0;
    const unsigned batch = std::max(1u, opts_.threads);
    while (true) {
      std::vector<ModPrime> primes;
      for (unsigned i = 0; i < batch && drawn < opts_.maxPrimes; ++i, ++drawn) {
        primes.push_back(source.next());
      }
      if (primes.empty()) {
        throw ResourceExhausted("rational reconstruction did not stabilise within " +
                                std::to_string(opts_.maxPrimes) + " primes");
      }
      std::vector<PrimeOutcome> outcomes;
      if (primes.size() == 1) {
        outcomes.push_back(image(primes[0]));
      } else {
        std::vector<std::future<PrimeOutcome>> futures;
        for (const auto& p : primes) {
          futures.push_back(std::async(std::launch::async, [this, p] { return image(p); }));
        }
        for (auto& fu : futures) outcomes.push_back(fu.get());
      }
      for (auto& o : outcomes) {
        if (auto done = absorb(o)) return std::move(*done);
      }
    }
  }

 private:
  PrimeOutcome image(const ModPrime& f) const {
    PrimeOutcome out;
    out.prime = f;
    try {
      if (!parametric_) {
        std::vector<Residue> t;
        t.reserve(pr_.terms.size());
        for (const auto& x : pr_.terms) t.push_back(reduceScalar(x.rational(), f));
        LeafImage img = leafImage(pr_, t, f, std::nullopt, opts_.tie);
        out.innerPoints = 1;
        if (img.basis.columns.empty()) {
          out.kind = PrimeOutcome::Kind::NoSolution;
          return out;
        }
        out.kind = PrimeOutcome::Kind::Image;
        out.record = img.record;
        out.flat = flatten(img.basis);
        return out;
      }
      std::vector<ModRatio> t;
      t.reserve(pr_.terms.size());
      for (const auto& x : pr_.terms) t.push_back(reducePolyScalar(x, f));
      return innerSolve(pr_, t, f, opts_);
    } catch (const BadModulus&) {
      out.kind = PrimeOutcome::Kind::Skipped;
      return out;
    }
  }

  void log(const std::string& s) const {
    if (opts_.debug) opts_.debug(s);
  }

  static std::string recordString(const ReductionRecord& r) {
    std::ostringstream os;
    os << "defects";
    for (int d : r.defects) os << ' ' << d;
    os << " crit";
    for (auto c : r.criticalIndices) os << ' ' << c + 1;
    return os.str();
  }

  std::optional<LiftResult> absorb(PrimeOutcome& o) {
    LiftTrace::Entry entry;
    entry.prime = o.prime.value();
    trace_.innerPoints += o.innerPoints;
    switch (o.kind) {
      case PrimeOutcome::Kind::Skipped:
        entry.skipped = true;
        trace_.primes.push_back(entry);
        log("prime " + std::to_string(entry.prime) + ": skipped (bad modulus)");
        return std::nullopt;
      case PrimeOutcome::Kind::NoSolution: {
        trace_.primes.push_back(entry);
        log("prime " + std::to_string(entry.prime) + ": no solution");
        LiftResult r;
        r.status = LiftResult::Status::NoSolution;
        r.trace = trace_;
        return r;
      }
      case PrimeOutcome::Kind::Failed:
        entry.status = Classification::Bad;
        trace_.primes.push_back(entry);
        ++bad_;
        log("prime " + std::to_string(entry.prime) + ": evaluation failed");
        return std::nullopt;
      case PrimeOutcome::Kind::Image:
        break;
    }

    Classification cls = checkReduction(o.record, record_);
    Shape shape;
    if (parametric_) {
      shape = shapeOf(o.coeffs);
      if (cls == Classification::Good && record_) cls = compareShapes(shape, shape_);
    }
    entry.status = cls;
    trace_.primes.push_back(entry);
    log("prime " + std::to_string(entry.prime) + ": " + recordString(o.record) + " -> " +
        (cls == Classification::Good ? "good" : cls == Classification::Bad ? "bad" : "all_bad"));
    if (cls == Classification::Bad) {
      ++bad_;
      return std::nullopt;
    }
    std::vector<Residue> flat = parametric_ ? flattenRatios(o.coeffs) : o.flat;
    if (cls == Classification::AllBad || !record_) {
      crt_ = CrtAccumulator(flat.size(), opts_.crtBlock);
      candidate_.reset();
      good_ = 0;
    }
    record_ = o.record;
    shape_ = shape;
    ++good_;

    if (candidate_) {
      if (confirms(*candidate_, o)) {
        LiftResult r;
        r.status = LiftResult::Status::Solved;
        r.basis = *candidate_;
        for (int d : record_->defects) {
          if (d > 0) r.defects.push_back(d);
        }
        r.trace = trace_;
        log("reconstruction confirmed after " + std::to_string(good_) + " good primes");
        return r;
      }
      candidate_.reset();
    }
    crt_.absorb(flat, o.prime.value());
    if (reconstructionDue(good_, opts_)) {
      ++trace_.reconstructionAttempts;
      candidate_ = reconstruct();
      log(std::string("reconstruction attempt: ") + (candidate_ ? "success" : "failed"));
    }
    return std::nullopt;
  }

  std::optional<std::vector<ExactColumn>> reconstruct() const {
    auto values = ratReconVec(crt_.values(), crt_.modulus());
    if (!values) return std::nullopt;
    if (!parametric_) {
      return unflatten(*values, pr_.bounds, [](const mpq_class& q) { return RatFun(q); });
    }
    std::vector<RatFun> coeffs;
    std::size_t pos = 0;
    for (const auto& [dn, dd] : shape_) {
      std::vector<mpq_class> num, den;
      for (int i = 0; i <= dn; ++i) num.push_back((*values)[pos++]);
      for (int i = 0; i <= dd; ++i) den.push_back((*values)[pos++]);
      PolyQ d(den);
      if (d.isZero()) return std::nullopt;
      coeffs.emplace_back(PolyQ(num), d);
    }
    return unflatten(coeffs, pr_.bounds, [](const RatFun& r) { return r; });
  }

  bool confirms(const std::vector<ExactColumn>& cand, const PrimeOutcome& o) const {
    try {
      if (!parametric_) {
        std::vector<Residue> flat;
        for (const auto& col : cand) {
          for (std::size_t l = 0; l < col.size(); ++l) {
            for (int d = 0; d < pr_.bounds[l]; ++d) {
              flat.push_back(static_cast<std::size_t>(d) < col[l].size()
                                 ? reduceScalar(col[l][d].rational(), o.prime)
                                 : 0);
            }
          }
        }
        return flat == o.flat;
      }
      std::size_t i = 0;
      for (const auto& col : cand) {
        for (std::size_t l = 0; l < col.size(); ++l) {
          for (int d = 0; d < pr_.bounds[l]; ++d, ++i) {
            RatFun c = static_cast<std::size_t>(d) < col[l].size() ? col[l][d] : RatFun();
            ModRatio r = reducePolyScalar(c, o.prime);
            if (r.num != o.coeffs[i].num || r.den != o.coeffs[i].den) return false;
          }
        }
      }
      return i == o.coeffs.size();
    } catch (const BadModulus&) {
      return false;
    }
  }

  const GuessProblem& pr_;
  const LiftOptions& opts_;
  bool parametric_;
  std::optional<ReductionRecord> record_;
  Shape shape_;
  CrtAccumulator crt_;
  std::optional<std::vector<ExactColumn>> candidate_;
  std::size_t good_ = 0, bad_ = 0;
  LiftTrace trace_;
};

}  // namespace

LiftResult doSolve(const GuessProblem& problem, const LiftOptions& opts) {
  if (problem.bounds.size() != problem.schema.m()) {
    throw UsageError("doSolve: degree bounds do not match the schema");
  }
  Driver d(problem, opts);
  return d.run();
}

}  // namespace seqguess
