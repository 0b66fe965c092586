#pragma once

// Predicted resonance strings. For a dominant pair (J,K) with l = x_K - x_J:
//   z_m = pi h m / l - i gamma h log(1/h) + (i h / 2l) log(-C_J C_K l^2 / (4 pi^2 h^2 m^2))
//   Im z(Re z) = -(h/l) log(2 Re z / (h^((b_J+b_K)/2) sqrt|C_J C_K|))
// For a flat slope gained by moving from `inner` to `outer`, l = |x_outer - x_inner|:
//   z~_m = pi h m / l - i gamma~ h log(1/h) + (i h / 2l) log(-C_outer / C_inner)
//   Im z = -gamma~ h log(1/h) + (h / 2l) log|C_outer / C_inner|

#include <cstddef>
#include <string>
#include <vector>

#include "resonance/model.hpp"
#include "resonance/polygon.hpp"

namespace resonance {

struct ResonanceString {
  std::size_t id = 0;      // slope position on the hull; 0 is the dominant string
  SlopeKind kind = SlopeKind::dominant;
  Rational gamma_exact;
  double gamma = 0.0;
  PairIndex pair;          // j < k
  std::size_t inner = 0;   // dominant: J; flat: index dropped from the hull pair
  std::size_t outer = 0;   // dominant: K; flat: index gained
  double length = 0.0;     // |x_outer - x_inner|
  double spacing = 0.0;    // pi h / length
  double exponent = 0.0;   // dominant: b_J + b_K; flat: b_outer - b_inner
  double c_inner = 0.0;
  double c_outer = 0.0;

  /// "γ_23" or "γ̃_12"
  std::string label() const;
};

/// One string per hull slope, dominant first. Throws NonGenericError.
std::vector<ResonanceString> strings_for(const DeltaSystem& system);

struct PredictedPoint {
  long m = 0;
  Complex z;
  std::size_t string_id = 0;
};

/// Eq. for z_m at a single m (m >= 1).
Complex predict_point(const ResonanceString& string, const DeltaSystem& system, long m);

/// All m >= 1 with pi h m / l in [re_min, re_max] whose Re z_m stays inside
/// the same range. Empty when none fit.
std::vector<PredictedPoint> predict_points(const ResonanceString& string, const DeltaSystem& system,
                                           const Window& window);

/// Im z as a function of Re z. Throws std::invalid_argument for re <= 0.
double theory_curve(const ResonanceString& string, const DeltaSystem& system, double re);

/// Nearest m whose predicted Re z_m is closest to Re z.
long m_estimate(const ResonanceString& string, const DeltaSystem& system, Complex z);

}  // namespace resonance
