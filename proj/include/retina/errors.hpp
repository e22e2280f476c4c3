#pragma once

#include <stdexcept>
#include <string>

namespace retina {

// Domain violations (bad probabilities, negative photon numbers, ...) are
// reported with std::domain_error. The types below cover the remaining
// failure classes the CLI maps to distinct exit codes.

/// A protocol cannot be sized to meet the requested error targets.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A run or session was configured in a way the protocol does not admit.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// A map, glyph or config document could not be read.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The Chernoff-type bound is outside its range of validity.
class BoundInapplicableError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A pattern challenge could not be placed on the map.
class PlacementError : public ConfigError {
 public:
  using ConfigError::ConfigError;
};

}  // namespace retina
