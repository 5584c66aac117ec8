#ifndef CHEAPTALK_EXPRESSION_HPP_
#define CHEAPTALK_EXPRESSION_HPP_

#include <memory>
#include <optional>
#include <string>
#include <string_view>

#include "cheaptalk/rational.hpp"
#include "cheaptalk/real.hpp"

namespace cheaptalk {

// Expression tree over rational literals, square roots and the four
// arithmetic operators. Grammar (whitespace is ignored):
//
//   expr   := term (('+'|'-') term)*
//   term   := factor (('*'|'/') factor)*
//   factor := INT | INT '/' INT | 'sqrt' '(' expr ')' | '(' expr ')'
class RealExpression {
 public:
  // Throws ParseError with a column diagnostic on malformed input.
  static RealExpression parse(std::string_view text);
  static RealExpression literal(const ExactRational& value);

  // Evaluates with 64 guard bits and rounds to `precision`; the result is
  // within 2^(8-precision) of the true value for the expressions this tool
  // handles. Throws EvalError on a negative square root or division by zero.
  ExactReal eval(int precision = kDefaultPrecision) const;

  // Exact value when the expression contains no square root.
  std::optional<ExactRational> exact() const;

  const std::string& source() const { return source_; }

  struct Node;

 private:
  std::shared_ptr<const Node> root_;
  std::string source_;
};

// Shorthand: parse + eval.
ExactReal eval_expression(std::string_view text, int precision = kDefaultPrecision);

}  // namespace cheaptalk

#endif  // CHEAPTALK_EXPRESSION_HPP_
