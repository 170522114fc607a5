#pragma once

#include <stdexcept>
#include <string>

namespace qsmag {

/// Invalid input: violated precondition, out-of-domain parameter.
class DomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A computation could not deliver a trustworthy result (indefinite overlap,
/// uncertified root isolation, failed bracket, level tracking).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class LevelTrackingError : public NumericalError {
 public:
  using NumericalError::NumericalError;
};

inline void require(bool condition, const std::string& message) {
  if (!condition) throw DomainError(message);
}

}  // namespace qsmag
