// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <stdexcept>
#include <string>

namespace tde {

/// Invalid configuration or precondition violation (CLI exit code 2).
class ConfigError : public std::invalid_argument {
 public:
  explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// Numerical guard failure: singular geometry, ill-conditioned solve,
/// degenerate inputs (CLI exit code 3).
class NumericalError : public std::runtime_error {
 public:
  explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

/// Too many Monte Carlo trials hit the search-grid boundary (CLI exit code 4).
class BoundaryHitError : public std::runtime_error {
 public:
  explicit BoundaryHitError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace tde
