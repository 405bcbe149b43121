#pragma once

#include <stdexcept>
#include <string>

namespace tnnflow {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid argument or precondition violation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A line orthogonal to the top eigenvector has no chart coordinates.
class ChartOverflow : public Error {
 public:
  using Error::Error;
};

/// The top eigenvalue of the tau action is not separated from the rest.
class SpectralGapError : public Error {
 public:
  using Error::Error;
};

}  // namespace tnnflow
