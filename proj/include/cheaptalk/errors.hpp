#ifndef CHEAPTALK_ERRORS_HPP_
#define CHEAPTALK_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace cheaptalk {

// Caller violated an operation's precondition (bad dimensions, empty input,
// out-of-range argument). The CLI maps this to exit code 2.
class UsageError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Malformed expression, game file or run artifact. Exit code 2.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Expression evaluation failure (negative square root, division by zero).
class EvalError : public ParseError {
 public:
  using ParseError::ParseError;
};

// Singular systems, failed vertex construction and similar numerical dead ends.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A protocol instance could not be built or executed (size caps, missing
// shares, inconsistent structures).
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace cheaptalk

#endif  // CHEAPTALK_ERRORS_HPP_
