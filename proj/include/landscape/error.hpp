#pragma once

#include <stdexcept>
#include <string>

namespace landscape {

/// Raised when caller-supplied input violates an operation's precondition
/// (infinite interval passed to a landscape builder, malformed file, ...).
/// The CLI maps this to exit code 2.
class ContractError : public std::invalid_argument {
 public:
  explicit ContractError(const std::string& what) : std::invalid_argument(what) {}
};

/// Raised when a numerical procedure cannot complete (singular covariance,
/// non positive-definite matrix, ...).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace landscape
