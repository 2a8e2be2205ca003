#include "seqguess/rings.hpp"

#include <algorithm>
#include <string>

namespace seqguess {

void trim(ModPoly& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

int degree(const ModPoly& a) {
  for (std::size_t i = a.size(); i-- > 0;) {
    if (a[i] != 0) return static_cast<int>(i);
  }
  return -1;
}

Residue evalPolyAt(const ModPoly& a, Residue point, const ModPrime& field) {
  std::uint64_t acc = 0;
  const std::uint64_t p = field.value();
  for (std::size_t i = a.size(); i-- > 0;) acc = (acc * point + a[i]) % p;
  return static_cast<Residue>(acc);
}

ModPoly polyMul(const ModPoly& a, const ModPoly& b, const ModPrime& field) {
  if (a.empty() || b.empty()) return {};
  ModPoly r(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] == 0) continue;
    mulAddInPlace(std::span<Residue>(r.data() + i, b.size()), b, a[i], field);
  }
  trim(r);
  return r;
}

ModPoly polySub(const ModPoly& a, const ModPoly& b, const ModPrime& field) {
  ModPoly r(std::max(a.size(), b.size()), 0);
  for (std::size_t i = 0; i < r.size(); ++i) {
    Residue x = i < a.size() ? a[i] : 0;
    Residue y = i < b.size() ? b[i] : 0;
    r[i] = field.sub(x, y);
  }
  trim(r);
  return r;
}

ModPoly polyScale(const ModPoly& a, Residue c, const ModPrime& field) {
  if (c == 0) return {};
  ModPoly r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = field.mul(a[i], c);
  return r;
}

void polyDivMod(const ModPoly& a, const ModPoly& b, ModPoly& q, ModPoly& r,
                const ModPrime& field) {
  int db = degree(b);
  if (db < 0) throw UsageError("polynomial division by zero");
  r = a;
  trim(r);
  int dr = degree(r);
  if (dr < db) {
    q.clear();
    return;
  }
  q.assign(dr - db + 1, 0);
  Residue invLead = field.inv(b[db]);
  const Residue p = field.value();
  while (dr >= db) {
    Residue f = field.mul(r[dr], invLead);
    std::size_t shift = dr - db;
    q[shift] = f;
    if (f != 0) {
      mulAddInPlace(std::span<Residue>(r.data() + shift, db + 1),
                    std::span<const Residue>(b.data(), db + 1), p - f, field);
    }
    r[dr] = 0;
    dr = degree(r);
  }
  trim(r);
  trim(q);
}

std::vector<Residue> cauchyMulTrunc(std::span<const Residue> a, std::span<const Residue> b,
                                    std::size_t order, const ModPrime& field) {
  std::vector<Residue> r(order, 0);
  const std::size_t na = std::min(a.size(), order);
  for (std::size_t i = 0; i < na; ++i) {
    if (a[i] == 0) continue;
    std::size_t len = std::min(b.size(), order - i);
    mulAddInPlace(std::span<Residue>(r.data() + i, len), b.subspan(0, len), a[i], field);
  }
  return r;
}

ModPoly reducePolyQ(const PolyQ& x, const ModPrime& field) {
  ModPoly r(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) r[i] = reduceScalar(x[i], field);
  trim(r);
  return r;
}

ModRatio reducePolyScalar(const RatFun& x, const ModPrime& field) {
  ModRatio r{reducePolyQ(x.num(), field), reducePolyQ(x.den(), field)};
  if (r.den.empty()) {
    throw BadModulus("denominator vanishes modulo " + std::to_string(field.value()));
  }
  return r;
}

Residue evalRatioAt(const ModRatio& r, Residue point, const ModPrime& field) {
  Residue d = evalPolyAt(r.den, point, field);
  if (d == 0) throw BadModulus("denominator vanishes at evaluation point");
  return field.div(evalPolyAt(r.num, point, field), d);
}

// ---------------------------------------------------------------------------

CrtAccumulator::CrtAccumulator(std::size_t width, std::size_t blockSize)
    : width_(width), blockSize_(std::max<std::size_t>(blockSize, 1)), total_(width), block_(width) {}

void CrtAccumulator::reset() {
  count_ = 0;
  inBlock_ = 0;
  std::fill(total_.begin(), total_.end(), 0);
  std::fill(block_.begin(), block_.end(), 0);
  totalMod_ = 1;
  blockMod_ = 1;
  viewValid_ = false;
}

void CrtAccumulator::absorb(std::span<const Residue> image, std::uint32_t modulus) {
  if (image.size() != width_) throw UsageError("CrtAccumulator: image width mismatch");
  if (modulus < 2) throw UsageError("CrtAccumulator: modulus must be at least 2");
  if (mpz_gcd_ui(nullptr, totalMod_.get_mpz_t(), modulus) != 1 ||
      mpz_gcd_ui(nullptr, blockMod_.get_mpz_t(), modulus) != 1) {
    throw UsageError("CrtAccumulator: modulus " + std::to_string(modulus) +
                     " is not coprime to the absorbed moduli");
  }
  const std::uint64_t p = modulus;
  // Garner step inside the block: x = B + P * ((m - B) * P^-1 mod p).
  std::uint64_t pmod = mpz_fdiv_ui(blockMod_.get_mpz_t(), modulus);
  mpz_class inv;
  {
    mpz_class pm = static_cast<unsigned long>(pmod), mm = static_cast<unsigned long>(modulus);
    mpz_invert(inv.get_mpz_t(), pm.get_mpz_t(), mm.get_mpz_t());
  }
  const std::uint64_t invP = inv.get_ui();
  for (std::size_t i = 0; i < width_; ++i) {
    std::uint64_t b = mpz_fdiv_ui(block_[i].get_mpz_t(), modulus);
    std::uint64_t diff = (image[i] % p + p - b) % p;
    std::uint64_t t = diff * invP % p;
    if (t != 0) mpz_addmul_ui(block_[i].get_mpz_t(), blockMod_.get_mpz_t(), t);
  }
  blockMod_ *= static_cast<unsigned long>(modulus);
  ++count_;
  ++inBlock_;
  viewValid_ = false;
  if (inBlock_ == blockSize_) mergeBlock();
}

namespace {

// x = a mod A, x = b mod B  ->  x mod AB.
void combinePair(mpz_class& a, const mpz_class& A, const mpz_class& b, const mpz_class& B,
                 const mpz_class& invAmodB) {
  mpz_class t = (b - a) * invAmodB;
  mpz_fdiv_r(t.get_mpz_t(), t.get_mpz_t(), B.get_mpz_t());
  a += A * t;
}

}  // namespace

void CrtAccumulator::mergeBlock() {
  if (inBlock_ == 0) return;
  mpz_class inv;
  mpz_invert(inv.get_mpz_t(), totalMod_.get_mpz_t(), blockMod_.get_mpz_t());
  if (blockMod_ == 1) inv = 0;
  for (std::size_t i = 0; i < width_; ++i) {
    combinePair(total_[i], totalMod_, block_[i], blockMod_, inv);
    block_[i] = 0;
  }
  totalMod_ *= blockMod_;
  blockMod_ = 1;
  inBlock_ = 0;
}

void CrtAccumulator::refreshView() const {
  if (viewValid_) return;
  view_ = total_;
  viewMod_ = totalMod_;
  if (inBlock_ > 0) {
    mpz_class inv;
    mpz_invert(inv.get_mpz_t(), totalMod_.get_mpz_t(), blockMod_.get_mpz_t());
    for (std::size_t i = 0; i < width_; ++i) {
      combinePair(view_[i], totalMod_, block_[i], blockMod_, inv);
    }
    viewMod_ = totalMod_ * blockMod_;
  }
  viewValid_ = true;
}

const std::vector<mpz_class>& CrtAccumulator::values() const {
  refreshView();
  return view_;
}

const mpz_class& CrtAccumulator::modulus() const {
  refreshView();
  return viewMod_;
}

// ---------------------------------------------------------------------------

void NewtonInterpolator::add(Residue point, Residue value) {
  Residue w = evalPolyAt(nodes_, point, field_);
  if (w == 0) {
    throw UsageError("interpolation point " + std::to_string(point) + " used twice");
  }
  Residue v = evalPolyAt(interp_, point, field_);
  Residue c = field_.div(field_.sub(value, v), w);
  if (c != 0) {
    if (interp_.size() < nodes_.size()) interp_.resize(nodes_.size(), 0);
    mulAddInPlace(std::span<Residue>(interp_.data(), nodes_.size()), nodes_, c, field_);
    trim(interp_);
  }
  // nodes *= (t - point)
  nodes_.push_back(0);
  Residue negp = field_.neg(point);
  for (std::size_t i = nodes_.size() - 1; i > 0; --i) {
    nodes_[i] = field_.add(nodes_[i - 1], field_.mul(nodes_[i], negp));
  }
  nodes_[0] = field_.mul(nodes_[0], negp);
  xs_.push_back(point);
}

// ---------------------------------------------------------------------------

std::optional<mpq_class> ratRecon(const mpz_class& m, const mpz_class& modulus) {
  if (m < 0 || m >= modulus) throw UsageError("ratRecon: residue out of range");
  mpz_class bound = (modulus - 1) / 2;
  mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
  mpz_class r0 = modulus, r1 = m, t0 = 0, t1 = 1, q, tmp;
  while (r1 > bound) {
    mpz_fdiv_qr(q.get_mpz_t(), tmp.get_mpz_t(), r0.get_mpz_t(), r1.get_mpz_t());
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (abs(t1) > bound) return std::nullopt;
  mpz_class g;
  mpz_gcd(g.get_mpz_t(), t1.get_mpz_t(), modulus.get_mpz_t());
  if (g != 1) return std::nullopt;
  mpq_class res(r1, t1);
  res.canonicalize();
  return res;
}

std::optional<std::vector<mpq_class>> ratReconVec(std::span<const mpz_class> images,
                                                  const mpz_class& modulus,
                                                  RatReconStats* stats) {
  mpz_class bound = (modulus - 1) / 2;
  mpz_sqrt(bound.get_mpz_t(), bound.get_mpz_t());
  mpz_class half = modulus / 2;
  mpz_class den = 1;
  std::vector<mpq_class> out;
  out.reserve(images.size());
  for (const mpz_class& m : images) {
    if (den <= bound) {
      mpz_class a = den * m;
      mpz_fdiv_r(a.get_mpz_t(), a.get_mpz_t(), modulus.get_mpz_t());
      if (a > half) a -= modulus;
      if (abs(a) <= bound) {
        mpq_class v(a, den);
        v.canonicalize();
        out.push_back(v);
        if (stats) ++stats->shortcutHits;
        continue;
      }
    }
    auto r = ratRecon(m, modulus);
    if (stats) ++stats->fullReconstructions;
    if (!r) return std::nullopt;
    mpz_lcm(den.get_mpz_t(), den.get_mpz_t(), r->get_den_mpz_t());
    out.push_back(*r);
  }
  return out;
}

std::optional<ModRatio> polyRatRecon(const NewtonInterpolator& acc, std::size_t pointsUsed) {
  if (pointsUsed == 0 || pointsUsed > acc.points()) {
    throw UsageError("polyRatRecon: invalid number of points");
  }
  const ModPrime& f = acc.field();
  if (pointsUsed != acc.points()) {
    throw UsageError("polyRatRecon: accumulator holds a different number of points");
  }
  ModPoly r0 = acc.nodePolynomial(), r1 = acc.interpolant();
  ModPoly s0, s1{1};
  const int k = static_cast<int>(pointsUsed);
  std::optional<ModRatio> best;
  int bestTotal = k;
  auto consider = [&](const ModPoly& r, const ModPoly& s) {
    int dr = std::max(degree(r), 0);
    int ds = degree(s);
    if (ds < 0) return;
    if (dr + ds >= bestTotal) return;
    for (Residue x : acc.nodes()) {
      if (evalPolyAt(s, x, f) == 0) return;
    }
    Residue inv = f.inv(s[ds]);
    best = ModRatio{polyScale(r, inv, f), polyScale(s, inv, f)};
    trim(best->num);
    trim(best->den);
    bestTotal = dr + ds;
  };
  consider(r1, s1);
  while (!r1.empty()) {
    ModPoly q, r;
    polyDivMod(r0, r1, q, r, f);
    ModPoly s = polySub(s0, polyMul(q, s1, f), f);
    r0 = std::move(r1);
    r1 = std::move(r);
    s0 = std::move(s1);
    s1 = std::move(s);
    if (r1.empty()) break;
    consider(r1, s1);
  }
  return best;
}

}  // namespace seqguess
