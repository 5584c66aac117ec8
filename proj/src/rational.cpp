#include "cheaptalk/rational.hpp"

#include <cctype>

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

namespace mp = boost::multiprecision;

ExactRational::ExactRational(const BigInt& numerator, const BigInt& denominator) {
  if (denominator == 0) throw UsageError("rational with zero denominator");
  value_ = denominator < 0 ? mp::cpp_rational(BigInt(-numerator), BigInt(-denominator))
                           : mp::cpp_rational(numerator, denominator);
}

namespace {

BigInt parse_integer(std::string_view text, std::string_view whole) {
  if (text.empty()) {
    throw ParseError("malformed rational literal '" + std::string(whole) + "'");
  }
  for (char c : text) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("malformed rational literal '" + std::string(whole) + "'");
    }
  }
  return BigInt(std::string(text));
}

}  // namespace

ExactRational ExactRational::parse(std::string_view text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  BigInt num, den = 1;
  if (auto slash = body.find('/'); slash == std::string_view::npos) {
    num = parse_integer(body, text);
  } else {
    num = parse_integer(body.substr(0, slash), text);
    den = parse_integer(body.substr(slash + 1), text);
    if (den == 0) throw ParseError("zero denominator in '" + std::string(text) + "'");
  }
  return ExactRational(negative ? BigInt(-num) : num, den);
}

BigInt ExactRational::numerator() const { return mp::numerator(value_); }
BigInt ExactRational::denominator() const { return mp::denominator(value_); }

std::string ExactRational::to_string() const {
  return numerator().str() + "/" + denominator().str();
}

ExactRational operator/(const ExactRational& a, const ExactRational& b) {
  if (b.is_zero()) throw UsageError("rational division by zero");
  return ExactRational(ExactRational::Raw{}, a.value_ / b.value_);
}

BigInt big_gcd(const BigInt& a, const BigInt& b) { return mp::gcd(a, b); }

BigInt big_lcm(const BigInt& a, const BigInt& b) {
  if (a == 0 || b == 0) return 0;
  return mp::abs(a / mp::gcd(a, b) * b);
}

BigInt lcm_denominators(std::span<const ExactRational> values) {
  if (values.empty()) throw UsageError("lcm_denominators: empty list");
  BigInt result = 1;
  for (const auto& v : values) result = big_lcm(result, v.denominator());
  return result;
}

ExactRational sum(std::span<const ExactRational> values) {
  ExactRational total;
  for (const auto& v : values) total += v;
  return total;
}

}  // namespace cheaptalk
