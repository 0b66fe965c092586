#pragma once

// Physical configuration of N semiclassical delta barriers,
//   V(x) = sum_j C_j h^(1+beta_j) delta(x - x_j),
// and the per-barrier quantities shared by every evaluator:
//   omega   = exp(i z / h)
//   R_j(z)  = C_j h^beta_j / (2iz - C_j h^beta_j)
//   T_j(z)  = 2iz          / (2iz - C_j h^beta_j)

#include <complex>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resonance/rational.hpp"

namespace resonance {

using Complex = std::complex<double>;

/// 0-based pair of delta indices with j < k. Printed 1-based.
struct PairIndex {
  std::size_t j = 0;
  std::size_t k = 0;

  friend bool operator==(const PairIndex&, const PairIndex&) = default;
  friend auto operator<=>(const PairIndex&, const PairIndex&) = default;

  /// "12" for the 0-based pair (0, 1).
  std::string label() const;
};

struct DeltaBarrier {
  double x = 0.0;
  double beta = 0.0;
  double c = 0.0;
  // Exact copies of x and beta used by the Newton-polygon geometry.
  Rational x_exact;
  Rational beta_exact;

  /// Exact parts taken from the shortest decimal spelling of x and beta.
  static DeltaBarrier make(double x, double beta, double c);
  static DeltaBarrier make_exact(const Rational& x, const Rational& beta, double c);
};

struct DeltaSystem {
  double h = 0.1;
  std::vector<DeltaBarrier> deltas;

  std::size_t size() const { return deltas.size(); }
  /// C_j h^beta_j
  double coupling(std::size_t j) const;
};

struct Window {
  double re_min = 0.1;
  double re_max = 2.0;
  double im_min = -0.3;
  double im_max = 0.0;

  double width() const { return re_max - re_min; }
  double height() const { return im_max - im_min; }
  bool contains(Complex z) const;
  /// Grows each side by `fraction` of the corresponding extent.
  Window dilated(double fraction) const;
  /// Distance from an interior point to the closest edge (negative outside).
  double edge_distance(Complex z) const;
};

enum class ViolationKind {
  h_nonpositive,
  no_deltas,
  non_finite,
  positions_not_increasing,
  beta_nonpositive,
  coupling_zero,
  window_empty,
  window_re_nonpositive,
};

struct Violation {
  ViolationKind kind;
  std::optional<std::size_t> index;
  std::string message;
};

const char* to_string(ViolationKind kind);

/// Every violated invariant; empty means valid. Never throws.
std::vector<Violation> validate(const DeltaSystem& system);
std::vector<Violation> validate(const Window& window);

/// Exponent magnitude beyond which exp() is reported as overflow.
inline constexpr double kOverflowExponent = 700.0;
/// |2iz - C_j h^beta_j| below this is treated as a pole.
inline constexpr double kPoleTolerance = 1e-300;

/// omega^lambda = exp(i z lambda / h); nullopt when the magnitude would
/// exceed exp(700).
std::optional<Complex> omega_pow(const DeltaSystem& system, Complex z, double lambda);

/// R_j(z) and T_j(z); throw PoleError at 2iz == C_j h^beta_j.
Complex reflection_r(const DeltaSystem& system, std::size_t j, Complex z);
Complex transmission_t(const DeltaSystem& system, std::size_t j, Complex z);

/// Copy of `system` with deltas sorted by position. Returns true in
/// `reordered` when the input order changed.
DeltaSystem sorted_by_position(DeltaSystem system, bool* reordered = nullptr);

}  // namespace resonance
