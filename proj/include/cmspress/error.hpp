#pragma once

#include <stdexcept>
#include <string>

namespace cmspress {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed input, unknown names, violated preconditions. CLI exit code 2.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// An iterative method failed to converge. CLI exit code 3.
class NumericError : public Error {
 public:
  using Error::Error;
};

}  // namespace cmspress
