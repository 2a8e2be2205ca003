// Dense univariate polynomials over a prime field, truncated Cauchy products,
// Chinese remaindering, Newton interpolation and rational reconstruction.
#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <gmpxx.h>

#include "seqguess/exact.hpp"
#include "seqguess/modarith.hpp"

namespace seqguess {

/// Polynomial over Z_p, lowest degree first; trimmed unless stated otherwise.
using ModPoly = std::vector<Residue>;

void trim(ModPoly& a);
int degree(const ModPoly& a);
Residue evalPolyAt(const ModPoly& a, Residue point, const ModPrime& field);
ModPoly polyMul(const ModPoly& a, const ModPoly& b, const ModPrime& field);
ModPoly polySub(const ModPoly& a, const ModPoly& b, const ModPrime& field);
void polyDivMod(const ModPoly& a, const ModPoly& b, ModPoly& q, ModPoly& r,
                const ModPrime& field);
ModPoly polyScale(const ModPoly& a, Residue c, const ModPrime& field);

/// Coefficients of a*b through x^(order-1). Inputs shorter than `order` are
/// treated as zero-padded.
std::vector<Residue> cauchyMulTrunc(std::span<const Residue> a, std::span<const Residue> b,
                                    std::size_t order, const ModPrime& field);

/// Image of an element of Q(t) in Z_p(t).
struct ModRatio {
  ModPoly num;
  ModPoly den;
};

/// Coefficientwise reduction; BadModulus when a coefficient denominator is
/// divisible by p or the denominator image vanishes.
ModRatio reducePolyScalar(const RatFun& x, const ModPrime& field);
ModPoly reducePolyQ(const PolyQ& x, const ModPrime& field);

/// Value of a reduced ratio at a point; BadModulus when den(point) = 0.
Residue evalRatioAt(const ModRatio& r, Residue point, const ModPrime& field);

/// Chinese remaindering of residue vectors. Images are first combined inside
/// a block of `blockSize` moduli using machine-size arithmetic on the block
/// product, and only completed blocks are merged into the running total.
class CrtAccumulator {
 public:
  explicit CrtAccumulator(std::size_t width = 0, std::size_t blockSize = 100);

  void absorb(std::span<const Residue> image, std::uint32_t modulus);
  void reset();

  std::size_t width() const { return width_; }
  std::size_t count() const { return count_; }
  /// Combined residues in [0, modulus()), including a partially filled block.
  const std::vector<mpz_class>& values() const;
  const mpz_class& modulus() const;

 private:
  void mergeBlock();
  void refreshView() const;

  std::size_t width_;
  std::size_t blockSize_;
  std::size_t count_ = 0;
  std::size_t inBlock_ = 0;
  std::vector<mpz_class> total_;
  mpz_class totalMod_ = 1;
  std::vector<mpz_class> block_;
  mpz_class blockMod_ = 1;
  mutable bool viewValid_ = false;
  mutable std::vector<mpz_class> view_;
  mutable mpz_class viewMod_;
};

/// Incremental Newton interpolation over Z_p. Keeps the interpolant and the
/// node polynomial prod (t - x_i) in the monomial basis.
class NewtonInterpolator {
 public:
  explicit NewtonInterpolator(const ModPrime& field) : field_(field), nodes_{1} {}

  /// lagrangeAdd: absorbs one (point, value) pair. Repeated points are a
  /// usage error.
  void add(Residue point, Residue value);
  std::size_t points() const { return xs_.size(); }
  const ModPoly& interpolant() const { return interp_; }
  const ModPoly& nodePolynomial() const { return nodes_; }
  const std::vector<Residue>& nodes() const { return xs_; }
  const ModPrime& field() const { return field_; }

 private:
  ModPrime field_;
  std::vector<Residue> xs_;
  ModPoly interp_;
  ModPoly nodes_;
};

/// Reconstructs a/b from M mod `modulus` with |a|, |b| <= sqrt((modulus-1)/2)
/// and gcd(b, modulus) = 1.
std::optional<mpq_class> ratRecon(const mpz_class& m, const mpz_class& modulus);

struct RatReconStats {
  std::size_t fullReconstructions = 0;
  std::size_t shortcutHits = 0;
};

/// Entrywise rational reconstruction, imposing the running common
/// denominator of earlier entries on later ones before falling back.
std::optional<std::vector<mpq_class>> ratReconVec(std::span<const mpz_class> images,
                                                  const mpz_class& modulus,
                                                  RatReconStats* stats = nullptr);

/// Cauchy interpolation: num/den with deg num + deg den < points used and den
/// nonzero at every node, minimising deg num + deg den along the extended
/// Euclidean remainder sequence. The result is normalised with den monic.
std::optional<ModRatio> polyRatRecon(const NewtonInterpolator& acc, std::size_t pointsUsed);

}  // namespace seqguess
