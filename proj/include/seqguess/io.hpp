// Reading term lists and printing guessed equations.
#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "seqguess/guess.hpp"
#include "seqguess/modarith.hpp"

namespace seqguess {

/// Input that could not be parsed; carries a 1-based position.
class ParseError : public UsageError {
 public:
  ParseError(const std::string& what, std::size_t line, std::size_t column);
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_, column_;
};

struct ParsedSequence {
  std::vector<RatFun> terms;
  long offset = 0;  // index of the first term (b-files)
};

/// A single expression: rationals, decimals, and, when `param` is nonempty,
/// rational functions in that symbol built with + - * / ^ and parentheses.
/// Adjacent factors multiply ("2x", "(1+q)(1+q^2)").
RatFun parseTerm(const std::string& text, const std::string& param = "");

/// Terms separated by commas, semicolons, newlines or blanks; optional
/// surrounding brackets; '#' starts a comment.
ParsedSequence parseSequence(const std::string& text, const std::string& param = "");

/// OEIS b-file: lines "index value", '#' comments, contiguous indices.
ParsedSequence parseBFile(const std::string& text, const std::string& param = "");

inline constexpr int kJsonSchemaVersion = 1;

std::string renderText(const GuessResult& r);
std::string renderText(const OperatorExpr& e, const Names& names);

nlohmann::json toJson(const GuessResult& r);
nlohmann::json toJson(const OperatorExpr& e);
/// Inverse of toJson for the equation, initial values, names and check status.
GuessResult resultFromJson(const nlohmann::json& j);
OperatorExpr exprFromJson(const nlohmann::json& j);

}  // namespace seqguess
