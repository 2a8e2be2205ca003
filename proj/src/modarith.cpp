#include "seqguess/modarith.hpp"

#include <algorithm>

namespace seqguess {

namespace {

std::uint64_t mulmod64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
  std::uint64_t r = 1 % m;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

}  // namespace

bool isPrime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t small : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    if (n % small == 0) return n == small;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Deterministic base set for 64-bit inputs.
  for (std::uint64_t a : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u}) {
    std::uint64_t x = powmod64(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod64(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

ModPrime::ModPrime(std::uint32_t p) : p_(p) {
  if (p < 3 || p >= (1u << 31) || !isPrime(p)) {
    throw UsageError("modulus " + std::to_string(p) + " is not an odd prime below 2^31");
  }
}

Residue ModPrime::inv(Residue a) const {
  if (a == 0) throw UsageError("inverse of zero");
  std::int64_t t0 = 0, t1 = 1;
  std::int64_t r0 = p_, r1 = a;
  while (r1 != 0) {
    std::int64_t q = r0 / r1;
    std::int64_t tmp = r0 - q * r1;
    r0 = r1;
    r1 = tmp;
    tmp = t0 - q * t1;
    t0 = t1;
    t1 = tmp;
  }
  if (t0 < 0) t0 += p_;
  return static_cast<Residue>(t0);
}

Residue ModPrime::pow(Residue a, std::uint64_t e) const {
  Residue r = 1;
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

Residue ModPrime::fromInt(std::int64_t v) const {
  std::int64_t r = v % static_cast<std::int64_t>(p_);
  if (r < 0) r += p_;
  return static_cast<Residue>(r);
}

void mulAddInPlace(std::span<Residue> v1, std::span<const Residue> v2, Residue c,
                   const ModPrime& field) {
  if (v1.size() != v2.size()) {
    throw UsageError("mulAddInPlace: length mismatch (" + std::to_string(v1.size()) + " vs " +
                     std::to_string(v2.size()) + ")");
  }
  if (c == 0) return;
  const std::uint64_t p = field.value();
  const std::uint64_t cc = c;
  Residue* out = v1.data();
  const Residue* in = v2.data();
  const std::size_t n = v1.size();
  for (std::size_t i = 0; i < n; ++i) {
    out[i] = static_cast<Residue>((out[i] + cc * in[i]) % p);
  }
}

void mulAddInPlace(PackedVec& v1, const PackedVec& v2, Residue c, const ModPrime& field) {
  mulAddInPlace(v1.span(), v2.span(), c, field);
}

ModPrime samplePrime(int bits, const std::set<std::uint32_t>& exclude, std::mt19937_64& rng) {
  if (bits < 3 || bits > 31) {
    throw UsageError("samplePrime: bits must lie in [3, 31], got " + std::to_string(bits));
  }
  const std::uint32_t lo = 1u << (bits - 1);
  const std::uint32_t span = lo;  // [lo, 2*lo)
  std::uniform_int_distribution<std::uint32_t> dist(0, span - 1);
  const std::uint32_t start = dist(rng);
  // Scan forward from a random start, wrapping once around the interval.
  for (std::uint32_t k = 0; k < span; ++k) {
    std::uint32_t cand = lo + (start + k) % span;
    if (cand < 3) continue;
    if (exclude.count(cand)) continue;
    if (isPrime(cand)) return ModPrime(cand);
  }
  throw ConfigurationError("no unused primes of " + std::to_string(bits) + " bits remain");
}

PrimeSource::PrimeSource(std::uint64_t seed, int bits, std::vector<std::uint32_t> forced)
    : rng_(seed), bits_(bits), forced_(std::move(forced)) {}

ModPrime PrimeSource::next() {
  while (forcedPos_ < forced_.size()) {
    std::uint32_t p = forced_[forcedPos_++];
    if (used_.insert(p).second) return ModPrime(p);
  }
  ModPrime p = samplePrime(bits_, used_, rng_);
  used_.insert(p.value());
  return p;
}

Residue reduceInteger(const mpz_class& x, const ModPrime& field) {
  return static_cast<Residue>(mpz_fdiv_ui(x.get_mpz_t(), field.value()));
}

Residue reduceScalar(const mpq_class& x, const ModPrime& field) {
  Residue den = reduceInteger(x.get_den(), field);
  if (den == 0) {
    throw BadModulus("prime " + std::to_string(field.value()) + " divides a denominator");
  }
  return field.div(reduceInteger(x.get_num(), field), den);
}

}  // namespace seqguess
