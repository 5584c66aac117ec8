#ifndef CHEAPTALK_RATIONAL_HPP_
#define CHEAPTALK_RATIONAL_HPP_

#include <compare>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

namespace cheaptalk {

using BigInt = boost::multiprecision::cpp_int;

// Exact rational number in canonical form: denominator > 0 and
// gcd(|numerator|, denominator) == 1.
class ExactRational {
 public:
  ExactRational() = default;
  ExactRational(long long value) : value_(value) {}  // NOLINT: implicit
  ExactRational(const BigInt& value) : value_(value) {}  // NOLINT: implicit
  // Throws UsageError on a zero denominator.
  ExactRational(const BigInt& numerator, const BigInt& denominator);

  // Accepts "n", "n/d" and "-n/d" with decimal integers.
  static ExactRational parse(std::string_view text);

  BigInt numerator() const;
  BigInt denominator() const;

  bool is_zero() const { return value_ == 0; }
  bool is_integer() const { return denominator() == 1; }
  int sign() const { return value_.sign(); }

  // Always "num/den", including integers ("3/1").
  std::string to_string() const;
  double to_double() const { return value_.convert_to<double>(); }

  friend ExactRational operator+(const ExactRational& a, const ExactRational& b) {
    return ExactRational(Raw{}, a.value_ + b.value_);
  }
  friend ExactRational operator-(const ExactRational& a, const ExactRational& b) {
    return ExactRational(Raw{}, a.value_ - b.value_);
  }
  friend ExactRational operator*(const ExactRational& a, const ExactRational& b) {
    return ExactRational(Raw{}, a.value_ * b.value_);
  }
  // Throws UsageError when b is zero.
  friend ExactRational operator/(const ExactRational& a, const ExactRational& b);
  ExactRational operator-() const { return ExactRational(Raw{}, -value_); }

  ExactRational& operator+=(const ExactRational& o) { value_ += o.value_; return *this; }
  ExactRational& operator-=(const ExactRational& o) { value_ -= o.value_; return *this; }
  ExactRational& operator*=(const ExactRational& o) { value_ *= o.value_; return *this; }
  ExactRational& operator/=(const ExactRational& o) { return *this = *this / o; }

  friend bool operator==(const ExactRational& a, const ExactRational& b) {
    return a.value_ == b.value_;
  }
  friend std::strong_ordering operator<=>(const ExactRational& a,
                                          const ExactRational& b) {
    if (a.value_ < b.value_) return std::strong_ordering::less;
    if (a.value_ > b.value_) return std::strong_ordering::greater;
    return std::strong_ordering::equal;
  }

 private:
  struct Raw {};
  ExactRational(Raw, boost::multiprecision::cpp_rational v) : value_(std::move(v)) {}

  boost::multiprecision::cpp_rational value_;
};

using RationalVector = std::vector<ExactRational>;

// Least common multiple of the denominators. Throws UsageError on empty input.
BigInt lcm_denominators(std::span<const ExactRational> values);

ExactRational sum(std::span<const ExactRational> values);

BigInt big_gcd(const BigInt& a, const BigInt& b);
BigInt big_lcm(const BigInt& a, const BigInt& b);

}  // namespace cheaptalk

#endif  // CHEAPTALK_RATIONAL_HPP_
