#include "cheaptalk/numerics.hpp"

#include <algorithm>

#include "cheaptalk/errors.hpp"

namespace cheaptalk {

namespace {
constexpr int kSolveGuardBits = 32;
}

std::vector<ExactReal> solve_linear(const RealMatrix& matrix,
                                    const std::vector<ExactReal>& rhs) {
  const std::size_t n = rhs.size();
  if (n == 0 || matrix.size() != n) throw UsageError("solve_linear: shape mismatch");
  int precision = 0;
  for (const auto& row : matrix) {
    if (row.size() != n) throw UsageError("solve_linear: matrix is not square");
    for (const auto& v : row) precision = std::max(precision, v.precision());
  }
  for (const auto& v : rhs) precision = std::max(precision, v.precision());
  const int work = precision + kSolveGuardBits;

  // Augmented matrix at working precision.
  std::vector<std::vector<ExactReal>> a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& v : matrix[i]) a[i].push_back(v.with_precision(work));
    a[i].push_back(rhs[i].with_precision(work));
  }
  const ExactReal min_pivot = ExactReal::pow2(16 - precision, work);
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].abs() > a[pivot][col].abs()) pivot = r;
    }
    if (a[pivot][col].abs() < min_pivot) {
      throw NumericError("solve_linear: matrix is singular at working precision");
    }
    std::swap(a[col], a[pivot]);
    for (std::size_t r = col + 1; r < n; ++r) {
      if (a[r][col].is_zero()) continue;
      ExactReal factor = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= n; ++c) a[r][c] -= factor * a[col][c];
    }
  }
  std::vector<ExactReal> x(n);
  for (std::size_t i = n; i-- > 0;) {
    ExactReal acc = a[i][n];
    for (std::size_t c = i + 1; c < n; ++c) acc -= a[i][c] * x[c];
    x[i] = acc / a[i][i];
  }
  for (auto& v : x) v = v.with_precision(precision);
  return x;
}

ExactRational rationalize(const ExactRational& x, const BigInt& max_denominator) {
  if (max_denominator < 1) throw UsageError("rationalize: max_denominator must be positive");
  if (x.denominator() <= max_denominator) return x;
  // Continued-fraction convergents p/q of x, tracking the previous pair.
  BigInt p0 = 0, q0 = 1, p1 = 1, q1 = 0;
  BigInt n = x.numerator(), d = x.denominator();
  while (true) {
    BigInt a = n / d;
    if (n.sign() < 0 && a * d != n) a -= 1;  // floor for negatives
    BigInt q2 = q0 + a * q1;
    if (q2 > max_denominator) break;
    BigInt p2 = p0 + a * p1;
    p0 = p1; q0 = q1; p1 = p2; q1 = q2;
    BigInt rem = n - a * d;
    n = d;
    d = rem;
    if (d == 0) break;
  }
  // Best semiconvergent below the bound versus the last convergent.
  BigInt k = (max_denominator - q0) / q1;
  ExactRational semi(p0 + k * p1, q0 + k * q1);
  ExactRational conv(p1, q1);
  auto dist = [&](const ExactRational& r) {
    ExactRational diff = r - x;
    return diff.sign() < 0 ? -diff : diff;
  };
  auto ds = dist(semi), dc = dist(conv);
  if (ds < dc) return semi;
  if (dc < ds) return conv;
  return semi.denominator() < conv.denominator() ? semi : conv;
}

ExactRational rationalize(const ExactReal& x, const BigInt& max_denominator) {
  return rationalize(x.to_rational(), max_denominator);
}

ExactReal residual_norm(const RealMatrix& matrix, const std::vector<ExactReal>& x,
                        const std::vector<ExactReal>& rhs) {
  ExactReal worst = ExactReal::from_int(0, rhs.empty() ? kDefaultPrecision : rhs[0].precision());
  for (std::size_t i = 0; i < matrix.size(); ++i) {
    ExactReal acc = -rhs[i];
    for (std::size_t j = 0; j < x.size(); ++j) acc += matrix[i][j] * x[j];
    worst = std::max(worst, acc.abs());
  }
  return worst;
}

}  // namespace cheaptalk
