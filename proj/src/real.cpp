#include "cheaptalk/real.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

namespace mp = boost::multiprecision;

BigInt shift_right_rounded(const BigInt& value, unsigned shift) {
  if (shift == 0) return value;
  BigInt magnitude = mp::abs(value);
  magnitude += BigInt(1) << (shift - 1);
  magnitude >>= shift;
  return value.sign() < 0 ? BigInt(-magnitude) : magnitude;
}

namespace {

BigInt rescale(const BigInt& mantissa, int from, int to) {
  if (to >= from) return mantissa << (to - from);
  return shift_right_rounded(mantissa, static_cast<unsigned>(from - to));
}

// Rounded division of integers, ties away from zero.
BigInt divide_rounded(const BigInt& num, const BigInt& den) {
  BigInt n = mp::abs(num), d = mp::abs(den);
  BigInt q = (2 * n + d) / (2 * d);
  return (num.sign() * den.sign() < 0) ? BigInt(-q) : q;
}

}  // namespace

ExactReal ExactReal::from_int(long long value, int precision) {
  return ExactReal(BigInt(value) << precision, precision);
}

ExactReal ExactReal::from_rational(const ExactRational& value, int precision) {
  return ExactReal(divide_rounded(value.numerator() << precision, value.denominator()),
                   precision);
}

ExactReal ExactReal::from_mantissa(BigInt mantissa, int precision) {
  return ExactReal(std::move(mantissa), precision);
}

ExactReal ExactReal::pow2(int exponent, int precision) {
  int shift = precision + exponent;
  if (shift >= 0) return ExactReal(BigInt(1) << shift, precision);
  // Below one unit in the last place: round to nearest.
  return ExactReal(shift == -1 ? BigInt(1) : BigInt(0), precision);
}

ExactReal ExactReal::parse_hex(const std::string& text) {
  std::string_view body = text;
  bool negative = false;
  if (!body.empty() && body.front() == '-') {
    negative = true;
    body.remove_prefix(1);
  }
  auto p = body.find("p-");
  if (body.size() < 5 || body.substr(0, 2) != "0x" || p == std::string_view::npos) {
    throw ParseError("malformed hex real '" + text + "'");
  }
  std::string hex(body.substr(2, p - 2));
  std::string exp(body.substr(p + 2));
  if (hex.empty() || exp.empty() ||
      !std::all_of(hex.begin(), hex.end(), [](char c) { return std::isxdigit(static_cast<unsigned char>(c)); }) ||
      !std::all_of(exp.begin(), exp.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw ParseError("malformed hex real '" + text + "'");
  }
  BigInt m("0x" + hex);
  int precision = std::stoi(exp);
  return ExactReal(negative ? BigInt(-m) : m, precision);
}

ExactReal ExactReal::with_precision(int precision) const {
  return ExactReal(rescale(mantissa_, precision_, precision), precision);
}

ExactReal ExactReal::abs() const { return ExactReal(mp::abs(mantissa_), precision_); }

BigInt ExactReal::floor() const {
  if (mantissa_.sign() >= 0) return mantissa_ >> precision_;
  BigInt magnitude = -mantissa_;
  BigInt q = magnitude >> precision_;
  if ((q << precision_) != magnitude) q += 1;
  return -q;
}

ExactReal ExactReal::fractional_part() const {
  return ExactReal(mantissa_ - (floor() << precision_), precision_);
}

ExactRational ExactReal::to_rational() const {
  return ExactRational(mantissa_, BigInt(1) << precision_);
}

double ExactReal::to_double() const {
  // Keep 64 significant bits, then scale.
  int excess = static_cast<int>(mp::msb(mp::abs(mantissa_ == 0 ? BigInt(1) : mantissa_))) - 63;
  if (excess > 0) {
    double head = shift_right_rounded(mantissa_, static_cast<unsigned>(excess)).convert_to<double>();
    return std::ldexp(head, excess - precision_);
  }
  return std::ldexp(mantissa_.convert_to<double>(), -precision_);
}

std::string ExactReal::to_decimal(int digits) const {
  BigInt magnitude = mp::abs(mantissa_);
  BigInt integer = magnitude >> precision_;
  BigInt frac = magnitude - (integer << precision_);
  BigInt scaled = (frac * mp::pow(BigInt(10), digits)) >> precision_;
  std::string frac_digits = scaled.str();
  if (static_cast<int>(frac_digits.size()) < digits) {
    frac_digits.insert(0, digits - frac_digits.size(), '0');
  }
  std::string out = mantissa_.sign() < 0 ? "-" : "";
  out += integer.str();
  if (digits > 0) out += "." + frac_digits;
  return out;
}

std::string ExactReal::to_hex() const {
  std::ostringstream hex;
  hex << std::hex << mp::abs(mantissa_);
  return std::string(mantissa_.sign() < 0 ? "-" : "") + "0x" + hex.str() + "p-" +
         std::to_string(precision_);
}

ExactReal operator+(const ExactReal& a, const ExactReal& b) {
  int p = std::max(a.precision_, b.precision_);
  return ExactReal(rescale(a.mantissa_, a.precision_, p) + rescale(b.mantissa_, b.precision_, p), p);
}

ExactReal operator-(const ExactReal& a, const ExactReal& b) {
  int p = std::max(a.precision_, b.precision_);
  return ExactReal(rescale(a.mantissa_, a.precision_, p) - rescale(b.mantissa_, b.precision_, p), p);
}

ExactReal operator*(const ExactReal& a, const ExactReal& b) {
  int p = std::max(a.precision_, b.precision_);
  BigInt product = a.mantissa_ * b.mantissa_;
  int scale = a.precision_ + b.precision_ - p;
  return ExactReal(shift_right_rounded(product, static_cast<unsigned>(scale)), p);
}

ExactReal operator/(const ExactReal& a, const ExactReal& b) {
  if (b.is_zero()) throw EvalError("division by zero");
  int p = std::max(a.precision_, b.precision_);
  // a/b * 2^p = ma * 2^(p - pa + pb) / mb
  int shift = p - a.precision_ + b.precision_;
  return ExactReal(divide_rounded(a.mantissa_ << shift, b.mantissa_), p);
}

ExactReal ExactReal::operator-() const { return ExactReal(-mantissa_, precision_); }

bool operator==(const ExactReal& a, const ExactReal& b) {
  int p = std::max(a.precision_, b.precision_);
  return (a.mantissa_ << (p - a.precision_)) == (b.mantissa_ << (p - b.precision_));
}

std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b) {
  int p = std::max(a.precision_, b.precision_);
  BigInt x = a.mantissa_ << (p - a.precision_);
  BigInt y = b.mantissa_ << (p - b.precision_);
  if (x < y) return std::strong_ordering::less;
  if (x > y) return std::strong_ordering::greater;
  return std::strong_ordering::equal;
}

ExactReal sqrt(const ExactReal& x) {
  if (x.sign() < 0) throw EvalError("square root of a negative value");
  // sqrt(m * 2^-P) * 2^P = sqrt(m * 2^P)
  BigInt root = mp::sqrt(BigInt(x.mantissa() << x.precision()));
  return ExactReal::from_mantissa(std::move(root), x.precision());
}

ExactReal sum(std::span<const ExactReal> values) {
  ExactReal total;
  if (!values.empty()) total = ExactReal::from_int(0, values.front().precision());
  for (const auto& v : values) total += v;
  return total;
}

std::vector<ExactReal> to_reals(std::span<const ExactRational> values, int precision) {
  std::vector<ExactReal> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(ExactReal::from_rational(v, precision));
  return out;
}

ExactReal default_tolerance(int precision) { return ExactReal::pow2(32 - precision, precision); }

}  // namespace cheaptalk
