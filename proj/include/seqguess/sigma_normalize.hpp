// Normalised sigma-bases and classification of modular reductions.
#pragma once

#include <cstddef>
#include <limits>
#include <vector>

#include "seqguess/hermite_pade.hpp"

namespace seqguess {

/// Defect of a zero component.
inline constexpr int kInfiniteDefect = std::numeric_limits<int>::max();

/// min_i (n_i - deg p_i); zero components are skipped. Zero vector: UsageError.
int defect(const PolyVec& p, const std::vector<int>& bounds);
/// Smallest index (0-based) attaining the defect. Zero vector: UsageError.
std::size_t criticalIndex(const PolyVec& p, const std::vector<int>& bounds);

/// Sorted (defect descending, critical index ascending), pairwise reduced and
/// monic at the critical index. Any subset of a sigma-basis closed under
/// "defect >= d" may be passed.
SigmaBasis normalizeBasis(const SigmaBasis& basis, const ModPrime& field);

struct ReductionRecord {
  std::vector<int> defects;
  std::vector<std::size_t> criticalIndices;
  std::vector<int> leadingExponents;

  friend bool operator==(const ReductionRecord&, const ReductionRecord&) = default;
};

/// Record of a normalised basis.
ReductionRecord reductionRecord(const SigmaBasis& normalized);

enum class Comparison { Equal, Better, Worse, Incompatible };

/// Better: `fresh` has componentwise smaller-or-equal defects and, where the
/// defects agree, smaller-or-equal critical indices, with one strict inequality.
Comparison compareReductions(const ReductionRecord& fresh, const ReductionRecord& old);

}  // namespace seqguess
