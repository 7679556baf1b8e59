#pragma once

#include <stdexcept>
#include <string>

namespace fracdpg {

/// Precondition violation: bad parameters, inconsistent dimensions, invalid meshes.
class InvalidArgument : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A numerical procedure could not produce a trustworthy result.
class NumericalFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The normal-equation matrix is singular: the discrete test space is too small
/// for the trial space (test degrees chosen too low).
class InfSupFailure : public NumericalFailure {
 public:
  explicit InfSupFailure(const std::string& detail)
      : NumericalFailure("discrete inf-sup failure: " + detail) {}
};

/// A block of the test Gram matrix is not symmetric positive definite.
class NotPositiveDefinite : public NumericalFailure {
 public:
  NotPositiveDefinite(int element, const std::string& detail)
      : NumericalFailure("test Gram block of element " + std::to_string(element) +
                         " is not positive definite: " + detail),
        element_(element) {}

  int element() const noexcept { return element_; }

 private:
  int element_;
};

}  // namespace fracdpg
