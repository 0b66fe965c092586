#pragma once

#include <stdexcept>
#include <string>

namespace resonance {

/// Malformed or out-of-contract input configuration.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// z sits on a pole of R_j / T_j (2iz == C_j h^beta_j).
class PoleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An exponential exceeded the exp(700) guard during evaluation.
class OverflowError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The system violates the slope-uniqueness (genericity) assumption and the
/// requested operation is only defined for generic systems.
class NonGenericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Hull structure contradicts the nested-interval property. Should be
/// unreachable for generic input; treat as a bug signal.
class StructureError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

}  // namespace resonance
