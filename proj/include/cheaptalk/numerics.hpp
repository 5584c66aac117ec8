#ifndef CHEAPTALK_NUMERICS_HPP_
#define CHEAPTALK_NUMERICS_HPP_

#include <vector>

#include "cheaptalk/rational.hpp"
#include "cheaptalk/real.hpp"

namespace cheaptalk {

using RealMatrix = std::vector<std::vector<ExactReal>>;  // row-major

// Gaussian elimination with partial pivoting, carried out with 32 guard bits
// over the widest input precision P. A pivot smaller than 2^(16-P) raises
// NumericError; a shape mismatch raises UsageError.
std::vector<ExactReal> solve_linear(const RealMatrix& matrix,
                                    const std::vector<ExactReal>& rhs);

// Best rational approximation of x with denominator <= max_denominator
// (continued fractions with semiconvergents). Works on the exact dyadic value
// of x. When two candidates are equally close the one with the smaller
// denominator wins.
ExactRational rationalize(const ExactReal& x, const BigInt& max_denominator);
ExactRational rationalize(const ExactRational& x, const BigInt& max_denominator);

// max_i |(A x - b)_i|
ExactReal residual_norm(const RealMatrix& matrix, const std::vector<ExactReal>& x,
                        const std::vector<ExactReal>& rhs);

}  // namespace cheaptalk

#endif  // CHEAPTALK_NUMERICS_HPP_
