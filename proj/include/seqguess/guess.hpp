// Guessing front ends: degree vector search, filtering, checking and
// operator recursion.
#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqguess/exact.hpp"
#include "seqguess/lift.hpp"
#include "seqguess/models.hpp"

namespace seqguess {

enum class CheckMode { Deterministic, MonteCarlo, Skip };
enum class CheckStatus { Verified, Probable, Unchecked };

/// A reconstructed equation failed its check twice.
class CheckFailed : public std::runtime_error {
 public:
  explicit CheckFailed(const std::string& what) : std::runtime_error(what) {}
};

struct Names {
  std::string function = "f";
  std::string index = "n";
  std::string variable = "x";
  std::string param = "q";
};

struct GuessOptions {
  std::optional<int> maxOrder;  // maxShift / maxDerivative
  std::optional<int> maxPower;
  int homogeneous = 0;  // 0 off, -1 all degrees up to maxPower, d > 0 exactly d
  int somos = 0;        // 0 off, -1 the range 2..maxOrder*power, s > 0 exactly s
  std::optional<int> maxDegree;
  std::optional<bool> allDegrees;  // unset: true for rat and pade
  int maxMixedDegree = 0;
  std::optional<int> maxLevel;
  int safety = 1;
  CheckMode check = CheckMode::Deterministic;
  int monteCarloTrials = 3;
  bool checkExtraValues = true;
  bool one = true;
  bool q = false;
  Names names;
  std::uint64_t seed = 1;
  unsigned threads = 1;
  std::function<void(const std::string&)> debug;
};

struct GuessResult {
  GuessClass cls = GuessClass::Rat;
  Schema schema;
  std::vector<int> bounds;
  ExactColumn equation;  // one polynomial per monomial, in n, q^n or x
  std::vector<RatFun> initial;  // f(0..k-1), Taylor values, or a series prefix (fe)
  CheckStatus check = CheckStatus::Unchecked;
  std::size_t conditionLimit = kUnbounded;  // conditions the equation is claimed on
  Names names;
};

/// Exact residuals of candidate equations against the supplied terms.
class Evaluator {
 public:
  Evaluator(const std::vector<RatFun>& terms, const Schema& schema, std::size_t maxBound);

  /// Conditions k < limit are determined by the data for this column.
  std::size_t checkable(const ExactColumn& col) const;
  RatFun residual(const ExactColumn& col, std::size_t k) const;
  /// Index of the first nonvanishing checkable condition below `limit`.
  std::optional<std::size_t> firstFailure(const ExactColumn& col, std::size_t from = 0,
                                          std::size_t limit = kUnbounded) const;
  /// Value of the point x_k (k, or q^k).
  RatFun point(std::size_t k) const;

  const Schema& schema() const { return schema_; }
  std::size_t terms() const { return n_; }
  const std::vector<RatFun>& stream(std::size_t l) const { return streams_[l]; }

 private:
  Schema schema_;
  std::size_t n_;
  bool series_;
  bool rational_;
  std::vector<std::vector<RatFun>> streams_;
  std::vector<std::vector<mpq_class>> qstreams_;  // rational fast path
  std::vector<std::size_t> known_;
};

/// Degree bound vectors (bound = degree + 1) summing to `total`.
std::vector<std::vector<int>> enumerateDegreeVectors(int total, int m, bool allDegrees,
                                                     std::optional<int> maxDegree,
                                                     std::size_t cap = 100000);

/// Basis columns vanishing on every checkable condition from `from` on.
/// When none does, pairwise combinations eliminating the first failing
/// residual are tried.
std::vector<ExactColumn> filterInterpolating(const std::vector<ExactColumn>& basis,
                                             const Evaluator& ev, std::size_t from = 0);

/// Scales to primitive integer coefficients with positive top coefficient
/// at the critical index.
ExactColumn normalizeOutput(ExactColumn col, const std::vector<int>& bounds);

bool checkDeterministic(const GuessResult& r, const std::vector<RatFun>& terms);
bool checkMonteCarlo(const GuessResult& r, const std::vector<RatFun>& terms, int trials,
                     std::uint64_t seed);

/// Initial values printed with an equation.
std::vector<RatFun> initialConditions(const GuessResult& r, const std::vector<RatFun>& terms);

std::vector<GuessResult> guess(const std::vector<RatFun>& terms, GuessClass cls,
                               const GuessOptions& opts);

/// f(n) = start + sum_{s<n} child(s), or f(n) = start * prod_{p<n} child(p) for
/// n >= offset (and 0 below offset).
struct OperatorExpr {
  enum class Kind { Leaf, Sum, Product };
  Kind kind = Kind::Leaf;
  GuessResult leaf;
  std::shared_ptr<OperatorExpr> child;
  RatFun start;
  std::size_t offset = 0;

  int level() const { return kind == Kind::Leaf ? 0 : 1 + child->level(); }
};

struct Operators {
  bool sum = false;
  bool product = false;
};

std::vector<OperatorExpr> guessWithOperators(const std::vector<RatFun>& terms,
                                             const std::vector<GuessClass>& base,
                                             Operators ops, const GuessOptions& opts);

/// Value of a sequence expression at n, or nullopt when a leaf does not
/// determine it.
std::optional<RatFun> evaluate(const OperatorExpr& e, std::size_t n);

/// Closed form of a rat leaf: f = num/den in the point variable.
std::pair<ExactPoly, ExactPoly> ratClosedForm(const GuessResult& r);

}  // namespace seqguess
