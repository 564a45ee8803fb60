#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace horofourier {

// Invalid grid, model or spectral configuration.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// A spectral symbol came within the floor of zero on the real spectrum.
class SymbolVanishes : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Inversion calibration did not reach its residual threshold.
class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A computation produced no usable number (zero or overflowing samples).
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Non-fatal numerical warnings (truncation tails, finite-difference fallback).
// Callers that care pass one in; everything else passes nullptr.
struct Diagnostics {
  std::vector<std::string> warnings;

  void warn(std::string message) { warnings.push_back(std::move(message)); }
  bool empty() const { return warnings.empty(); }
};

inline void warn(Diagnostics* diag, std::string message) {
  if (diag != nullptr) diag->warn(std::move(message));
}

}  // namespace horofourier
