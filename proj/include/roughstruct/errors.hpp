#pragma once

#include <stdexcept>

namespace roughstruct {

/// Malformed input or violated precondition. The CLI maps this to exit code 1.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation that ran but could not deliver a trustworthy result
/// (non-contraction, failed factorization, Chen violation). Exit code 2.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace roughstruct
