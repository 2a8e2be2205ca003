// Exact coefficient domains: dense polynomials over Q in one parameter and
// their quotients. Rationals are the degree-0 case of RatFun.
#pragma once

#include <string>
#include <vector>

#include <gmpxx.h>

namespace seqguess {

/// Dense polynomial over Q, lowest degree first, no trailing zeros.
class PolyQ {
 public:
  PolyQ() = default;
  PolyQ(const mpq_class& c);  // NOLINT(google-explicit-constructor)
  PolyQ(long c) : PolyQ(mpq_class(c)) {}  // NOLINT(google-explicit-constructor)
  explicit PolyQ(std::vector<mpq_class> coeffs);
  static PolyQ monomial(const mpq_class& c, std::size_t degree);

  bool isZero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  std::size_t size() const { return c_.size(); }
  const mpq_class& operator[](std::size_t i) const { return c_[i]; }
  mpq_class coeff(std::size_t i) const { return i < c_.size() ? c_[i] : mpq_class(0); }
  const mpq_class& lead() const { return c_.back(); }
  const std::vector<mpq_class>& coeffs() const { return c_; }
  bool isConstant() const { return c_.size() <= 1; }
  bool isOne() const { return c_.size() == 1 && c_[0] == 1; }

  PolyQ operator-() const;
  PolyQ& operator+=(const PolyQ& o);
  PolyQ& operator-=(const PolyQ& o);
  PolyQ& operator*=(const mpq_class& s);
  friend PolyQ operator+(PolyQ a, const PolyQ& b) { return a += b; }
  friend PolyQ operator-(PolyQ a, const PolyQ& b) { return a -= b; }
  friend PolyQ operator*(const PolyQ& a, const PolyQ& b);
  friend PolyQ operator*(PolyQ a, const mpq_class& s) { return a *= s; }
  friend bool operator==(const PolyQ& a, const PolyQ& b) { return a.c_ == b.c_; }

  /// Quotient and remainder over Q; throws on division by zero.
  static void divmod(const PolyQ& a, const PolyQ& b, PolyQ& q, PolyQ& r);
  /// Monic gcd (zero if both are zero).
  static PolyQ gcd(PolyQ a, PolyQ b);

  PolyQ monic() const;
  mpq_class eval(const mpq_class& x) const;
  /// Least common multiple of coefficient denominators.
  mpz_class denominatorLcm() const;
  std::string toString(const std::string& var) const;

 private:
  void trim();
  std::vector<mpq_class> c_;
};

/// Element of Q(t): num/den, gcd(num, den) = 1, den monic; zero is 0/1.
class RatFun {
 public:
  RatFun() : num_(), den_(1) {}
  RatFun(const mpq_class& c) : num_(c), den_(1) {}  // NOLINT(google-explicit-constructor)
  RatFun(long c) : RatFun(mpq_class(c)) {}           // NOLINT(google-explicit-constructor)
  RatFun(const PolyQ& p) : num_(p), den_(1) {}       // NOLINT(google-explicit-constructor)
  RatFun(PolyQ num, PolyQ den);
  /// The parameter t itself.
  static RatFun parameter();

  const PolyQ& num() const { return num_; }
  const PolyQ& den() const { return den_; }
  bool isZero() const { return num_.isZero(); }
  bool isOne() const { return num_.isOne() && den_.isOne(); }
  bool isRational() const { return num_.isConstant() && den_.isOne(); }
  bool isPolynomial() const { return den_.isOne(); }
  /// Value of a constant; only meaningful when isRational().
  mpq_class rational() const { return num_.isZero() ? mpq_class(0) : num_[0]; }

  RatFun operator-() const;
  RatFun inverse() const;
  friend RatFun operator+(const RatFun& a, const RatFun& b);
  friend RatFun operator-(const RatFun& a, const RatFun& b);
  friend RatFun operator*(const RatFun& a, const RatFun& b);
  friend RatFun operator/(const RatFun& a, const RatFun& b);
  RatFun& operator+=(const RatFun& o) { return *this = *this + o; }
  RatFun& operator-=(const RatFun& o) { return *this = *this - o; }
  RatFun& operator*=(const RatFun& o) { return *this = *this * o; }
  friend bool operator==(const RatFun& a, const RatFun& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }
  RatFun pow(unsigned e) const;

  std::string toString(const std::string& var) const;

 private:
  void normalize();
  PolyQ num_;
  PolyQ den_;
};

/// Sum of products accumulated over a common denominator without gcd work;
/// used for zero tests of long residual sums.
class LazySum {
 public:
  void add(const RatFun& term);
  bool isZero() const { return num_.isZero(); }

 private:
  PolyQ num_;
  PolyQ den_{1};
};

}  // namespace seqguess
