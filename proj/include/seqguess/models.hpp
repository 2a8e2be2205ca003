// Monomial schemas over integer partitions and the streams they induce.
#pragma once

#include <cstddef>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "seqguess/exact.hpp"
#include "seqguess/hermite_pade.hpp"

namespace seqguess {

enum class GuessClass { Rat, Pade, PRec, Rec, Holo, Alg, ADE, FE };

std::string className(GuessClass c);
std::optional<GuessClass> parseClassName(const std::string& s);
/// Power series classes (coefficients are Taylor coefficients).
bool isSeriesClass(GuessClass c);

/// How a part k of a partition acts on f.
enum class Interpretation {
  Shift,       // f(n + k - 1)
  Derivative,  // D^(k-1) f(x)
  QDilation,   // f(q^(k-1) x)
  Mahler,      // f(x^k)
};

Interpretation interpretationOf(GuessClass c, bool q);

struct Monomial {
  std::vector<int> parts;  // weakly decreasing, empty for the constant 1
  int mixed = 0;           // extra factor q^(mixed * n)
  friend bool operator==(const Monomial&, const Monomial&) = default;
};

class SchemaExhausted : public std::runtime_error {
 public:
  explicit SchemaExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct SchemaOptions {
  std::optional<int> maxOrder;  // maxShift or maxDerivative
  std::optional<int> maxPower;
  int homogeneous = 0;  // 0: off, -1: any degree >= 1, d > 0: exactly d
  int somos = 0;        // 0: off, s > 0: sum of (part - 1) equals s
  int maxMixedDegree = 0;
  bool q = false;
};

struct Schema {
  GuessClass cls = GuessClass::Rat;
  bool q = false;
  Interpretation interp = Interpretation::Shift;
  std::vector<Monomial> monomials;

  std::size_t m() const { return monomials.size(); }
  /// Conditions lost to shifting or differentiation.
  int conditionLoss() const;
  bool mixedMode() const;
};

/// Partitions of weight 0..maxWeight: grouped by weight, ascending
/// lexicographic on the descending part sequence within a weight.
std::vector<std::vector<int>> partitionsLex(int maxWeight);

/// First m monomials of the filtered partition stream, considering partitions
/// up to `maxWeight`. Throws SchemaExhausted when fewer exist.
Schema buildSchema(GuessClass cls, const SchemaOptions& opts, std::size_t m,
                   int maxWeight = 40);

inline constexpr std::size_t kUnbounded = std::numeric_limits<std::size_t>::max();

/// Number of leading entries of a monomial stream determined by N terms.
/// Sequences: indices n with all shifted terms available. Series: known
/// Taylor coefficients.
std::size_t knownLength(const Monomial& mono, Interpretation interp, std::size_t terms);

/// Pairwise truncated products computing every series monomial: each
/// multi-part partition is its tail (largest part removed) times one base
/// stream. Tails are shared.
struct CauchyPlan {
  struct Step {
    std::vector<int> target;
    std::vector<int> tail;
    int factor = 0;
  };
  std::vector<Step> steps;
};
CauchyPlan cauchyPlan(const Schema& schema);
/// Products a per-monomial evaluation would perform.
std::size_t naiveProductCount(const Schema& schema);

/// Modular streams for one Hermite-Pade instance. `terms` are the reduced
/// input terms; `qPoint` is the value of q when the schema is q-flagged.
OrderProblem buildImages(const std::vector<Residue>& terms, const Schema& schema,
                         const std::vector<int>& bounds, std::size_t sigma,
                         const ModPrime& field, std::optional<Residue> qPoint = std::nullopt);

/// Exact monomial stream, `length` entries (must not exceed knownLength).
std::vector<RatFun> exactStream(const std::vector<RatFun>& terms, const Schema& schema,
                                std::size_t index, std::size_t length);

/// Exact point x_k of the schedule: k, or q^k in q-mode.
RatFun exactPoint(const Schema& schema, std::size_t k);

}  // namespace seqguess
