#pragma once

#include <stdexcept>
#include <string>

namespace clusterexp {

// Invalid input: bad parameter, out-of-range argument, malformed instance.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A configured size cap (vertices, graph count, integration order) was exceeded.
class ResourceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A quadrature or series failed to reach its tolerance, or an integral diverges.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A smallness condition required by a closed-form bound does not hold.
class DivergenceError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Inputs are individually valid but mutually inconsistent (e.g. a stability
// constant that no configuration point satisfies).
class InconsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace clusterexp
