#pragma once

#include <stdexcept>
#include <string>

namespace tetra {

/// Argument outside the domain of a function (e.g. a non-positive squared distance).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Two particles coincide, or come closer than a configured floor.
class CollisionError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An iterative solver (bracketing, Newton, continuation) failed to converge.
class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Two independent computations disagree, or exact arithmetic produced a remainder.
class ConsistencyError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// Malformed configuration or command line.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace tetra
