#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "oracles.hpp"
#include "seqguess/sigma_normalize.hpp"

using namespace seqguess;

TEST_CASE("defect and criticalIndex") {
  std::vector<int> n{2, 2, 2};
  PolyVec a{{1}, {6}, {}};
  CHECK(defect(a, n) == 2);
  CHECK(criticalIndex(a, n) == 0);
  PolyVec e{{}, {1}, {}};
  CHECK(defect(e, std::vector<int>{3, 5, 1}) == 5);
  CHECK(criticalIndex(e, std::vector<int>{3, 5, 1}) == 1);
  PolyVec x{{}, {}, {0, 1}};
  CHECK(defect(x, n) == 1);
  CHECK(criticalIndex(x, n) == 2);
  PolyVec shifted{{0, 1}, {0, 6}, {}};
  CHECK(defect(shifted, n) == 1);
  CHECK_THROWS_AS(defect(PolyVec{{}, {}, {}}, n), UsageError);
  CHECK_THROWS_AS(criticalIndex(PolyVec{{}, {}, {}}, n), UsageError);
}

TEST_CASE("compareReductions") {
  ReductionRecord a{{3, 1}, {0, 1}, {0, 1}};
  CHECK(compareReductions(a, a) == Comparison::Equal);
  ReductionRecord b{{2, 1}, {0, 1}, {1, 1}};
  CHECK(compareReductions(a, b) == Comparison::Worse);
  CHECK(compareReductions(b, a) == Comparison::Better);
  ReductionRecord c{{2, 3}, {0, 1}, {1, 0}}, d{{3, 2}, {0, 1}, {0, 1}};
  CHECK(compareReductions(c, d) == Comparison::Incompatible);
  ReductionRecord e{{1}, {0}, {0}};
  CHECK_THROWS_AS(compareReductions(a, e), UsageError);
}

namespace {

bool isNormalized(const SigmaBasis& b, const ModPrime&) {
  const auto& n = b.bounds;
  for (std::size_t r = 0; r < b.columns.size(); ++r) {
    std::size_t cr = criticalIndex(b.columns[r], n);
    if (b.columns[r][cr].back() != 1) return false;
    if (r + 1 < b.columns.size()) {
      int d0 = b.defects[r], d1 = b.defects[r + 1];
      if (d0 < d1) return false;
      if (d0 == d1 && cr >= criticalIndex(b.columns[r + 1], n)) return false;
    }
    for (std::size_t s = 0; s < b.columns.size(); ++s) {
      if (s == r) continue;
      if (degree(b.columns[s][cr]) >= degree(b.columns[r][cr])) return false;
    }
  }
  return true;
}

}  // namespace

TEST_CASE("normalised bases do not depend on pivot tie-breaking") {
  ModPrime f(2147483629u);
  std::mt19937_64 rng(99);
  for (int t = 0; t < 300; ++t) {
    OrderProblem pr = oracle::randomProblem(rng, f, 3, 3, 9,
                                            t % 2 ? PointKind::Confluent : PointKind::Distinct);
    SigmaBasis a = normalizeBasis(sigmaBasis(pr, f, TieBreak::SmallestIndex), f);
    SigmaBasis b = normalizeBasis(sigmaBasis(pr, f, TieBreak::LargestIndex), f);
    CHECK(a.columns == b.columns);
    CHECK(a.defects == b.defects);
    CHECK(isNormalized(a, f));
    CHECK(normalizeBasis(a, f).columns == a.columns);
  }
}

TEST_CASE("normalisation is invariant under admissible basis changes") {
  ModPrime f(1000003);
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Residue> d(1, f.value() - 1);
  for (int t = 0; t < 200; ++t) {
    OrderProblem pr = oracle::randomProblem(rng, f, 3, 3, 8, PointKind::Confluent);
    SigmaBasis raw = sigmaBasis(pr, f);
    SigmaBasis ref = normalizeBasis(raw, f);

    SigmaBasis moved = raw;
    std::vector<std::size_t> perm(raw.columns.size());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t r = 0; r < perm.size(); ++r) {
      moved.columns[r] = raw.columns[perm[r]];
      moved.defects[r] = raw.defects[perm[r]];
    }
    for (auto& col : moved.columns) {
      Residue c = d(rng);
      for (auto& comp : col) {
        for (auto& v : comp) v = f.mul(v, c);
      }
    }
    // add x^j multiples of higher-defect columns
    for (std::size_t r = 0; r < moved.columns.size(); ++r) {
      for (std::size_t s = 0; s < moved.columns.size(); ++s) {
        int gap = moved.defects[s] - moved.defects[r];
        if (s == r || gap < 0) continue;
        Residue c = d(rng);
        std::size_t shift = gap == 0 ? 0 : std::uniform_int_distribution<int>(0, gap)(rng);
        for (std::size_t l = 0; l < moved.columns[r].size(); ++l) {
          const ModPoly& src = moved.columns[s][l];
          ModPoly& dst = moved.columns[r][l];
          if (src.empty()) continue;
          if (dst.size() < src.size() + shift) dst.resize(src.size() + shift, 0);
          for (std::size_t k = 0; k < src.size(); ++k) {
            dst[k + shift] = f.add(dst[k + shift], f.mul(c, src[k]));
          }
          trim(dst);
        }
        // keep the column nonzero and of the same defect
        bool zero = std::all_of(moved.columns[r].begin(), moved.columns[r].end(),
                                [](const ModPoly& p) { return p.empty(); });
        if (zero || defect(moved.columns[r], moved.bounds) != moved.defects[r]) {
          moved.columns[r] = raw.columns[perm[r]];
        }
        break;
      }
    }
    SigmaBasis again = normalizeBasis(moved, f);
    CHECK(again.columns == ref.columns);
  }
}
