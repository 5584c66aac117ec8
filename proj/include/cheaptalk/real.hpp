#ifndef CHEAPTALK_REAL_HPP_
#define CHEAPTALK_REAL_HPP_

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cheaptalk/rational.hpp"

namespace cheaptalk {

inline constexpr int kDefaultPrecision = 128;

// Fixed-point real: value = mantissa * 2^-precision with an unbounded integer
// mantissa. Binary operations carry the larger operand precision; products,
// quotients and square roots round to nearest, so each contributes at most
// 2^-(precision+1) of error. Sums and differences are exact.
class ExactReal {
 public:
  ExactReal() = default;

  static ExactReal from_int(long long value, int precision = kDefaultPrecision);
  static ExactReal from_rational(const ExactRational& value,
                                 int precision = kDefaultPrecision);
  // mantissa * 2^-precision, no rounding.
  static ExactReal from_mantissa(BigInt mantissa, int precision);
  // 2^exponent (exponent may be negative; values below 2^-precision round to 0).
  static ExactReal pow2(int exponent, int precision = kDefaultPrecision);
  // Parses the "0x<hex>p-<P>" form produced by to_hex().
  static ExactReal parse_hex(const std::string& text);

  int precision() const { return precision_; }
  const BigInt& mantissa() const { return mantissa_; }

  // Rescales to a new precision, rounding to nearest when precision drops.
  ExactReal with_precision(int precision) const;

  int sign() const { return mantissa_.sign(); }
  bool is_zero() const { return mantissa_ == 0; }
  ExactReal abs() const;
  // Largest integer <= value.
  BigInt floor() const;
  // value - floor(value), in [0, 1).
  ExactReal fractional_part() const;

  // Exact value of the fixed-point number as a rational.
  ExactRational to_rational() const;
  double to_double() const;
  // Decimal rendering with `digits` digits after the point, truncated toward
  // zero ("-0.7071...").
  std::string to_decimal(int digits = 40) const;
  // Exact hex-float literal "0x<hex mantissa>p-<precision>"; negative values
  // carry a leading '-'.
  std::string to_hex() const;

  friend ExactReal operator+(const ExactReal& a, const ExactReal& b);
  friend ExactReal operator-(const ExactReal& a, const ExactReal& b);
  friend ExactReal operator*(const ExactReal& a, const ExactReal& b);
  // Throws EvalError on division by zero.
  friend ExactReal operator/(const ExactReal& a, const ExactReal& b);
  ExactReal operator-() const;

  ExactReal& operator+=(const ExactReal& o) { return *this = *this + o; }
  ExactReal& operator-=(const ExactReal& o) { return *this = *this - o; }
  ExactReal& operator*=(const ExactReal& o) { return *this = *this * o; }
  ExactReal& operator/=(const ExactReal& o) { return *this = *this / o; }

  // Comparison is on the exact values, across precisions.
  friend bool operator==(const ExactReal& a, const ExactReal& b);
  friend std::strong_ordering operator<=>(const ExactReal& a, const ExactReal& b);

 private:
  ExactReal(BigInt mantissa, int precision)
      : mantissa_(std::move(mantissa)), precision_(precision) {}

  BigInt mantissa_ = 0;
  int precision_ = kDefaultPrecision;
};

// Floor square root at the argument's precision. Throws EvalError when x < 0.
ExactReal sqrt(const ExactReal& x);

ExactReal sum(std::span<const ExactReal> values);

// Converts every entry of a rational vector.
std::vector<ExactReal> to_reals(std::span<const ExactRational> values,
                                int precision = kDefaultPrecision);

// Default verifier tolerance 2^(32-P).
ExactReal default_tolerance(int precision = kDefaultPrecision);

// Rounds a BigInt right shift to nearest, ties away from zero; sign-safe.
BigInt shift_right_rounded(const BigInt& value, unsigned shift);

}  // namespace cheaptalk

#endif  // CHEAPTALK_REAL_HPP_
