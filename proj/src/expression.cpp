#include "cheaptalk/expression.hpp"

#include <cctype>
#include <variant>

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

struct RealExpression::Node {
  enum class Kind { kLiteral, kSqrt, kAdd, kSub, kMul, kDiv };
  Kind kind;
  ExactRational value;  // kLiteral only
  std::shared_ptr<const Node> lhs, rhs;
};

namespace {

using Node = RealExpression::Node;
using NodePtr = std::shared_ptr<const Node>;

NodePtr make_literal(ExactRational v) {
  return std::make_shared<Node>(Node{Node::Kind::kLiteral, std::move(v), nullptr, nullptr});
}

NodePtr make_node(Node::Kind kind, NodePtr lhs, NodePtr rhs = nullptr) {
  return std::make_shared<Node>(Node{kind, ExactRational(), std::move(lhs), std::move(rhs)});
}

// Recursive-descent parser over a whitespace-stripped copy of the input.
class Parser {
 public:
  explicit Parser(std::string_view text) : original_(text) {
    for (std::size_t i = 0; i < text.size(); ++i) {
      if (!std::isspace(static_cast<unsigned char>(text[i]))) {
        chars_.push_back(text[i]);
        columns_.push_back(i + 1);
      }
    }
  }

  NodePtr parse() {
    if (chars_.empty()) fail("empty expression");
    NodePtr e = expr();
    if (pos_ != chars_.size()) fail("unexpected '" + std::string(1, chars_[pos_]) + "'");
    return e;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    std::size_t column = pos_ < columns_.size() ? columns_[pos_] : original_.size() + 1;
    throw ParseError("expression '" + std::string(original_) + "': " + what +
                     " at column " + std::to_string(column));
  }

  bool peek(char c) const { return pos_ < chars_.size() && chars_[pos_] == c; }

  NodePtr expr() {
    NodePtr lhs = term();
    while (peek('+') || peek('-')) {
      auto kind = chars_[pos_++] == '+' ? Node::Kind::kAdd : Node::Kind::kSub;
      lhs = make_node(kind, lhs, term());
    }
    return lhs;
  }

  NodePtr term() {
    NodePtr lhs = factor();
    while (peek('*') || peek('/')) {
      auto kind = chars_[pos_++] == '*' ? Node::Kind::kMul : Node::Kind::kDiv;
      lhs = make_node(kind, lhs, factor());
    }
    return lhs;
  }

  BigInt integer() {
    std::size_t start = pos_;
    while (pos_ < chars_.size() && std::isdigit(static_cast<unsigned char>(chars_[pos_]))) ++pos_;
    if (start == pos_) fail("expected integer");
    return BigInt(chars_.substr(start, pos_ - start));
  }

  NodePtr factor() {
    if (pos_ >= chars_.size()) fail("unexpected end of expression");
    if (peek('(')) {
      ++pos_;
      NodePtr e = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return e;
    }
    if (chars_.compare(pos_, 4, "sqrt") == 0) {
      pos_ += 4;
      if (!peek('(')) fail("expected '(' after sqrt");
      ++pos_;
      NodePtr e = expr();
      if (!peek(')')) fail("expected ')'");
      ++pos_;
      return make_node(Node::Kind::kSqrt, e);
    }
    if (std::isdigit(static_cast<unsigned char>(chars_[pos_]))) {
      BigInt num = integer();
      // INT '/' INT is a single rational literal; a '/' followed by anything
      // else is left to term() as a division.
      if (peek('/') && pos_ + 1 < chars_.size() &&
          std::isdigit(static_cast<unsigned char>(chars_[pos_ + 1]))) {
        ++pos_;
        BigInt den = integer();
        if (den == 0) fail("zero denominator in literal");
        return make_literal(ExactRational(num, den));
      }
      return make_literal(ExactRational(num));
    }
    fail("unexpected '" + std::string(1, chars_[pos_]) + "'");
  }

  std::string_view original_;
  std::string chars_;
  std::vector<std::size_t> columns_;
  std::size_t pos_ = 0;
};

ExactReal eval_node(const Node& n, int precision) {
  switch (n.kind) {
    case Node::Kind::kLiteral:
      return ExactReal::from_rational(n.value, precision);
    case Node::Kind::kSqrt: {
      ExactReal arg = eval_node(*n.lhs, precision);
      // Rounding can push an exact zero slightly negative.
      if (arg.sign() < 0) {
        if (arg.abs() > ExactReal::pow2(16 - precision, precision)) {
          throw EvalError("square root of a negative value");
        }
        return ExactReal::from_int(0, precision);
      }
      return sqrt(arg);
    }
    case Node::Kind::kAdd:
      return eval_node(*n.lhs, precision) + eval_node(*n.rhs, precision);
    case Node::Kind::kSub:
      return eval_node(*n.lhs, precision) - eval_node(*n.rhs, precision);
    case Node::Kind::kMul:
      return eval_node(*n.lhs, precision) * eval_node(*n.rhs, precision);
    case Node::Kind::kDiv: {
      ExactReal den = eval_node(*n.rhs, precision);
      if (den.is_zero()) throw EvalError("division by zero");
      return eval_node(*n.lhs, precision) / den;
    }
  }
  throw EvalError("corrupt expression node");
}

std::optional<ExactRational> exact_node(const Node& n) {
  switch (n.kind) {
    case Node::Kind::kLiteral:
      return n.value;
    case Node::Kind::kSqrt:
      return std::nullopt;
    default:
      break;
  }
  auto a = exact_node(*n.lhs);
  if (!a) return std::nullopt;
  auto b = exact_node(*n.rhs);
  if (!b) return std::nullopt;
  switch (n.kind) {
    case Node::Kind::kAdd: return *a + *b;
    case Node::Kind::kSub: return *a - *b;
    case Node::Kind::kMul: return *a * *b;
    case Node::Kind::kDiv:
      if (b->is_zero()) throw EvalError("division by zero");
      return *a / *b;
    default: return std::nullopt;
  }
}

constexpr int kGuardBits = 64;

}  // namespace

RealExpression RealExpression::parse(std::string_view text) {
  RealExpression e;
  e.root_ = Parser(text).parse();
  e.source_ = std::string(text);
  return e;
}

RealExpression RealExpression::literal(const ExactRational& value) {
  RealExpression e;
  e.root_ = make_literal(value);
  e.source_ = value.denominator() == 1 ? value.numerator().str() : value.to_string();
  return e;
}

ExactReal RealExpression::eval(int precision) const {
  if (auto q = exact()) return ExactReal::from_rational(*q, precision);
  return eval_node(*root_, precision + kGuardBits).with_precision(precision);
}

std::optional<ExactRational> RealExpression::exact() const { return exact_node(*root_); }

ExactReal eval_expression(std::string_view text, int precision) {
  return RealExpression::parse(text).eval(precision);
}

}  // namespace cheaptalk
