// Order-basis (sigma-basis) solver over a prime field.
#pragma once

#include <cstddef>
#include <vector>

#include "seqguess/modarith.hpp"
#include "seqguess/rings.hpp"

namespace seqguess {

enum class PointKind {
  Confluent,  // power series: conditions are the coefficients of x^0..x^(sigma-1)
  Distinct,   // sequences: conditions are evaluations at pairwise distinct points
};

/// One Hermite-Pade instance over Z_p.
struct OrderProblem {
  std::vector<std::vector<Residue>> streams;  // m streams of sigma entries
  std::vector<int> bounds;                    // exclusive degree bounds, >= 1
  std::size_t sigma = 0;
  PointKind kind = PointKind::Confluent;
  std::vector<Residue> points;  // sigma entries when kind == Distinct

  std::size_t m() const { return streams.size(); }
};

/// A polynomial vector: m components, each lowest degree first.
using PolyVec = std::vector<ModPoly>;

struct SigmaBasis {
  std::vector<PolyVec> columns;
  std::vector<int> defects;
  std::vector<int> bounds;
};

enum class TieBreak { SmallestIndex, LargestIndex };

/// Single-step elimination over the conditions in order. Pivot: nonzero
/// residual with maximal defect, ties broken per `tie`.
SigmaBasis sigmaBasis(const OrderProblem& problem, const ModPrime& field,
                      TieBreak tie = TieBreak::SmallestIndex);

/// Columns with defect >= 1, i.e. those meeting the degree bounds.
std::vector<PolyVec> solutionColumns(const SigmaBasis& basis);

/// Value of condition j for the vector p (zero iff p satisfies it).
Residue conditionResidual(const OrderProblem& problem, const PolyVec& p, std::size_t j,
                          const ModPrime& field);

}  // namespace seqguess
