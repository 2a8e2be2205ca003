#include "seqguess/exact.hpp"

#include <sstream>
#include <stdexcept>

namespace seqguess {

namespace {

std::string formatRational(const mpq_class& q) { return q.get_str(); }

}  // namespace

PolyQ::PolyQ(const mpq_class& c) {
  if (c != 0) c_.push_back(c);
}

PolyQ::PolyQ(std::vector<mpq_class> coeffs) : c_(std::move(coeffs)) { trim(); }

PolyQ PolyQ::monomial(const mpq_class& c, std::size_t degree) {
  if (c == 0) return PolyQ();
  std::vector<mpq_class> v(degree + 1);
  v[degree] = c;
  return PolyQ(std::move(v));
}

void PolyQ::trim() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

PolyQ PolyQ::operator-() const {
  PolyQ r = *this;
  for (auto& x : r.c_) x = -x;
  return r;
}

PolyQ& PolyQ::operator+=(const PolyQ& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] += o.c_[i];
  trim();
  return *this;
}

PolyQ& PolyQ::operator-=(const PolyQ& o) {
  if (o.c_.size() > c_.size()) c_.resize(o.c_.size());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] -= o.c_[i];
  trim();
  return *this;
}

PolyQ& PolyQ::operator*=(const mpq_class& s) {
  if (s == 0) {
    c_.clear();
    return *this;
  }
  for (auto& x : c_) x *= s;
  return *this;
}

PolyQ operator*(const PolyQ& a, const PolyQ& b) {
  if (a.isZero() || b.isZero()) return PolyQ();
  if (a.c_.size() == 1) return b * a.c_[0];
  if (b.c_.size() == 1) return a * b.c_[0];
  std::vector<mpq_class> r(a.c_.size() + b.c_.size() - 1);
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i] == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r[i + j] += a.c_[i] * b.c_[j];
  }
  return PolyQ(std::move(r));
}

void PolyQ::divmod(const PolyQ& a, const PolyQ& b, PolyQ& q, PolyQ& r) {
  if (b.isZero()) throw std::domain_error("polynomial division by zero");
  r = a;
  if (a.degree() < b.degree()) {
    q = PolyQ();
    return;
  }
  std::vector<mpq_class> qc(a.c_.size() - b.c_.size() + 1);
  const mpq_class& lb = b.lead();
  while (!r.isZero() && r.degree() >= b.degree()) {
    std::size_t shift = r.degree() - b.degree();
    mpq_class f = r.lead() / lb;
    qc[shift] = f;
    for (std::size_t j = 0; j < b.c_.size(); ++j) r.c_[j + shift] -= f * b.c_[j];
    r.c_.back() = 0;  // exact cancellation of the leading term
    r.trim();
  }
  q = PolyQ(std::move(qc));
}

PolyQ PolyQ::gcd(PolyQ a, PolyQ b) {
  while (!b.isZero()) {
    PolyQ q, r;
    divmod(a, b, q, r);
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

PolyQ PolyQ::monic() const {
  if (isZero() || lead() == 1) return *this;
  PolyQ r = *this;
  mpq_class inv = 1 / lead();
  r *= inv;
  return r;
}

mpq_class PolyQ::eval(const mpq_class& x) const {
  mpq_class acc = 0;
  for (std::size_t i = c_.size(); i-- > 0;) acc = acc * x + c_[i];
  return acc;
}

mpz_class PolyQ::denominatorLcm() const {
  mpz_class l = 1;
  for (const auto& c : c_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  return l;
}

std::string PolyQ::toString(const std::string& var) const {
  if (isZero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c_.size(); i-- > 0;) {
    const mpq_class& c = c_[i];
    if (c == 0) continue;
    mpq_class a = abs(c);
    if (first) {
      if (c < 0) os << "-";
    } else {
      os << (c < 0 ? " - " : " + ");
    }
    first = false;
    if (i == 0) {
      os << formatRational(a);
      continue;
    }
    if (a != 1) {
      os << formatRational(a);
      if (a.get_den() != 1) os << "*";
    }
    os << var;
    if (i > 1) os << "^" << i;
  }
  return os.str();
}

RatFun::RatFun(PolyQ num, PolyQ den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.isZero()) throw std::domain_error("rational function with zero denominator");
  normalize();
}

RatFun RatFun::parameter() { return RatFun(PolyQ::monomial(1, 1)); }

void RatFun::normalize() {
  if (num_.isZero()) {
    den_ = PolyQ(1);
    return;
  }
  if (den_.isConstant()) {
    if (!den_.isOne()) {
      num_ *= 1 / den_[0];
      den_ = PolyQ(1);
    }
    return;
  }
  PolyQ g = PolyQ::gcd(num_, den_);
  if (!g.isOne()) {
    PolyQ q, r;
    PolyQ::divmod(num_, g, q, r);
    num_ = std::move(q);
    PolyQ::divmod(den_, g, q, r);
    den_ = std::move(q);
  }
  if (den_.lead() != 1) {
    mpq_class inv = 1 / den_.lead();
    num_ *= inv;
    den_ *= inv;
  }
}

RatFun RatFun::operator-() const {
  RatFun r = *this;
  r.num_ = -r.num_;
  return r;
}

RatFun RatFun::inverse() const {
  if (isZero()) throw std::domain_error("inverse of zero");
  return RatFun(den_, num_);
}

RatFun operator+(const RatFun& a, const RatFun& b) {
  if (a.den_.isOne() && b.den_.isOne()) return RatFun(a.num_ + b.num_);
  if (a.den_ == b.den_) return RatFun(a.num_ + b.num_, a.den_);
  return RatFun(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RatFun operator-(const RatFun& a, const RatFun& b) { return a + (-b); }

RatFun operator*(const RatFun& a, const RatFun& b) {
  if (a.den_.isOne() && b.den_.isOne()) return RatFun(a.num_ * b.num_);
  return RatFun(a.num_ * b.num_, a.den_ * b.den_);
}

RatFun operator/(const RatFun& a, const RatFun& b) { return a * b.inverse(); }

RatFun RatFun::pow(unsigned e) const {
  RatFun r(1), base = *this;
  while (e) {
    if (e & 1) r *= base;
    e >>= 1;
    if (e) base *= base;
  }
  return r;
}

std::string RatFun::toString(const std::string& var) const {
  if (den_.isOne()) return num_.toString(var);
  std::string n = num_.toString(var);
  std::string d = den_.toString(var);
  if (num_.size() > 1) n = "(" + n + ")";
  return n + "/(" + d + ")";
}

void LazySum::add(const RatFun& term) {
  if (term.isZero()) return;
  if (term.den() == den_) {
    num_ += term.num();
    return;
  }
  num_ = num_ * term.den() + term.num() * den_;
  den_ = den_ * term.den();
}

}  // namespace seqguess
