// Modular driver: solves a guessing problem over Q or Q(t) from images
// modulo primes (and, for Q(t), at evaluation points of t).
#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqguess/exact.hpp"
#include "seqguess/models.hpp"
#include "seqguess/sigma_normalize.hpp"

namespace seqguess {

/// A resource cap (primes, evaluation points) was reached.
class ResourceExhausted : public std::runtime_error {
 public:
  explicit ResourceExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct GuessProblem {
  std::vector<RatFun> terms;
  Schema schema;
  std::vector<int> bounds;
  std::size_t sigma = 0;

  /// Coefficients live in Q(t) rather than Q.
  bool parametric() const;
};

/// Polynomial in x with coefficients in Q(t), lowest degree first.
using ExactPoly = std::vector<RatFun>;
/// One polynomial per schema monomial.
using ExactColumn = std::vector<ExactPoly>;

struct LiftOptions {
  std::uint64_t seed = 1;
  std::vector<std::uint32_t> forcedPrimes;  // handed out before sampled primes
  std::size_t maxPrimes = 10000;
  std::size_t maxInnerPoints = 0;  // 0: derived from the problem size
  std::size_t crtBlock = 100;
  std::size_t reconThreshold = 200;
  std::size_t reconStep = 100;
  unsigned threads = 1;  // > 1: images of several primes are computed concurrently
  TieBreak tie = TieBreak::SmallestIndex;
  std::function<void(const std::string&)> debug;
};

enum class Classification { Good, Bad, AllBad };

struct LiftTrace {
  struct Entry {
    std::uint32_t prime = 0;
    bool skipped = false;  // BadModulus while reducing
    Classification status = Classification::Good;
  };
  std::vector<Entry> primes;
  std::size_t reconstructionAttempts = 0;
  std::size_t innerPoints = 0;
};

struct LiftResult {
  enum class Status { Solved, NoSolution };
  Status status = Status::NoSolution;
  std::vector<ExactColumn> basis;  // normalised solution columns
  std::vector<int> defects;
  LiftTrace trace;
};

/// First reduction is good; Equal -> good, Better -> all_bad, otherwise bad.
Classification checkReduction(const ReductionRecord& fresh,
                              const std::optional<ReductionRecord>& state);

/// Integer level: every image up to the threshold, then every `step`-th.
bool reconstructionDue(std::size_t count, const LiftOptions& opts);
/// Polynomial level: at perfect-square point counts.
bool pointReconstructionDue(std::size_t points);

/// Record of the normalised solution columns of a modular basis, padded to
/// m entries with clipped defect 0.
ReductionRecord solutionRecord(const SigmaBasis& normalizedSolutions, std::size_t m);

/// Normalised solution columns (defect >= 1) of one modular instance.
SigmaBasis solveModular(const OrderProblem& problem, const ModPrime& field, TieBreak tie);

LiftResult doSolve(const GuessProblem& problem, const LiftOptions& opts);

/// Reduction of an exact column modulo p. Throws BadModulus if a
/// denominator vanishes. Only valid for non-parametric columns.
PolyVec reduceColumn(const ExactColumn& col, const ModPrime& field);

}  // namespace seqguess
