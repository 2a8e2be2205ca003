// Machine-word prime field arithmetic and the packed multiply-add kernel.
#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace seqguess {

using Residue = std::uint32_t;

/// Raised when a modulus (prime or evaluation point) cannot be used for the
/// data at hand, e.g. it divides a denominator. The caller discards it.
class BadModulus : public std::runtime_error {
 public:
  explicit BadModulus(const std::string& what) : std::runtime_error(what) {}
};

/// Contract violations by the caller (mismatched lengths, repeated points...).
class UsageError : public std::invalid_argument {
 public:
  explicit UsageError(const std::string& what) : std::invalid_argument(what) {}
};

/// Configuration cannot be satisfied (e.g. no primes left of a given size).
class ConfigurationError : public std::runtime_error {
 public:
  explicit ConfigurationError(const std::string& what) : std::runtime_error(what) {}
};

bool isPrime(std::uint64_t n);

/// A prime p < 2^31. Products of two residues fit in 62 bits, so a product
/// plus an accumulator never overflows 64-bit arithmetic.
class ModPrime {
 public:
  ModPrime() = default;
  explicit ModPrime(std::uint32_t p);

  std::uint32_t value() const { return p_; }

  Residue add(Residue a, Residue b) const {
    std::uint32_t s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Residue sub(Residue a, Residue b) const { return a >= b ? a - b : a + p_ - b; }
  Residue neg(Residue a) const { return a == 0 ? 0 : p_ - a; }
  Residue mul(Residue a, Residue b) const {
    return static_cast<Residue>(static_cast<std::uint64_t>(a) * b % p_);
  }
  /// Multiplicative inverse; throws UsageError on zero.
  Residue inv(Residue a) const;
  Residue div(Residue a, Residue b) const { return mul(a, inv(b)); }
  Residue pow(Residue a, std::uint64_t e) const;
  Residue fromInt(std::int64_t v) const;
  Residue fromUnsigned(std::uint64_t v) const { return static_cast<Residue>(v % p_); }
  /// Symmetric representative in (-p/2, p/2].
  std::int64_t symmetric(Residue a) const {
    return a > p_ / 2 ? static_cast<std::int64_t>(a) - p_ : static_cast<std::int64_t>(a);
  }

  friend bool operator==(const ModPrime&, const ModPrime&) = default;

 private:
  std::uint32_t p_ = 0;
};

/// Contiguous residues. `stride` records how many logical components share
/// one slot (e.g. the m components of a polynomial vector at one degree).
class PackedVec {
 public:
  PackedVec() = default;
  explicit PackedVec(std::size_t len, std::size_t stride = 1) : data_(len, 0), stride_(stride) {}
  PackedVec(std::vector<Residue> data, std::size_t stride = 1)
      : data_(std::move(data)), stride_(stride) {}

  std::size_t size() const { return data_.size(); }
  std::size_t stride() const { return stride_; }
  Residue& operator[](std::size_t i) { return data_[i]; }
  Residue operator[](std::size_t i) const { return data_[i]; }
  std::span<Residue> span() { return data_; }
  std::span<const Residue> span() const { return data_; }
  const std::vector<Residue>& data() const { return data_; }

 private:
  std::vector<Residue> data_;
  std::size_t stride_ = 1;
};

/// v1[i] <- (v1[i] + c * v2[i]) mod p, in place.
void mulAddInPlace(std::span<Residue> v1, std::span<const Residue> v2, Residue c,
                   const ModPrime& field);
void mulAddInPlace(PackedVec& v1, const PackedVec& v2, Residue c, const ModPrime& field);

/// Draws a prime in [2^(bits-1), 2^bits) not contained in `exclude`.
ModPrime samplePrime(int bits, const std::set<std::uint32_t>& exclude, std::mt19937_64& rng);

/// Deterministic stream of distinct primes. A list of forced primes, when
/// given, is handed out first (used to steer tests through bad reductions).
class PrimeSource {
 public:
  explicit PrimeSource(std::uint64_t seed, int bits = 31, std::vector<std::uint32_t> forced = {});
  ModPrime next();
  std::size_t drawn() const { return used_.size(); }

 private:
  std::mt19937_64 rng_;
  int bits_;
  std::vector<std::uint32_t> forced_;
  std::size_t forcedPos_ = 0;
  std::set<std::uint32_t> used_;
};

/// a * b^-1 mod p for x = a/b. Throws BadModulus when p | b.
Residue reduceScalar(const mpq_class& x, const ModPrime& field);
Residue reduceInteger(const mpz_class& x, const ModPrime& field);

}  // namespace seqguess
