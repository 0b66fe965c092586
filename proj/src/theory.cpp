#include "resonance/theory.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "resonance/errors.hpp"

namespace resonance {

namespace {

constexpr double kPi = std::numbers::pi;

// Argument of the complex log in the string formula, without the positive
// l^2/(4 pi^2 h^2 m^2) factor.
double log_argument(const ResonanceString& s) {
  return s.kind == SlopeKind::dominant ? -s.c_inner * s.c_outer : -s.c_outer / s.c_inner;
}

}  // namespace

std::string ResonanceString::label() const {
  return (kind == SlopeKind::dominant ? "γ_" : "γ̃_") + pair.label();
}

std::vector<ResonanceString> strings_for(const DeltaSystem& system) {
  const NewtonPolygon polygon = build_polygon(system);
  interval_partition(polygon);  // throws for non-generic or malformed hulls

  std::vector<ResonanceString> out;
  for (std::size_t s = 0; s < polygon.slopes.size(); ++s) {
    const Slope& slope = polygon.slopes[s];
    ResonanceString str;
    str.id = s;
    str.kind = slope.kind;
    str.gamma_exact = slope.gamma;
    str.gamma = slope.value();
    str.pair = *slope.pair;
    str.inner = *slope.inner;
    str.outer = *slope.outer;
    const auto& a = system.deltas[str.inner];
    const auto& b = system.deltas[str.outer];
    str.length = std::abs(b.x - a.x);
    str.spacing = kPi * system.h / str.length;
    str.exponent = slope.kind == SlopeKind::dominant ? a.beta + b.beta : b.beta - a.beta;
    str.c_inner = a.c;
    str.c_outer = b.c;
    out.push_back(str);
  }
  return out;
}

Complex predict_point(const ResonanceString& s, const DeltaSystem& system, long m) {
  const double h = system.h;
  const double l = s.length;
  const double md = static_cast<double>(m);
  double arg = log_argument(s);
  if (s.kind == SlopeKind::dominant) arg *= l * l / (4.0 * kPi * kPi * h * h * md * md);
  const Complex log_term = std::log(Complex(arg, 0.0));
  return Complex(kPi * h * md / l, -s.gamma * h * std::log(1.0 / h)) + Complex(0.0, h / (2.0 * l)) * log_term;
}

std::vector<PredictedPoint> predict_points(const ResonanceString& s, const DeltaSystem& system,
                                           const Window& window) {
  if (!(system.h < 1.0)) throw std::invalid_argument("predict_points needs h < 1");
  if (!(window.re_min > 0.0)) throw std::invalid_argument("predict_points needs re_min > 0");
  std::vector<PredictedPoint> out;
  const double step = s.spacing;
  const long first = std::max(1L, static_cast<long>(std::ceil(window.re_min / step)));
  const long last = static_cast<long>(std::floor(window.re_max / step));
  for (long m = first; m <= last; ++m) {
    const Complex z = predict_point(s, system, m);
    if (z.real() < window.re_min || z.real() > window.re_max) continue;
    out.push_back({m, z, s.id});
  }
  return out;
}

double theory_curve(const ResonanceString& s, const DeltaSystem& system, double re) {
  if (!(re > 0.0)) throw std::invalid_argument("theory_curve needs Re z > 0");
  const double h = system.h;
  const double l = s.length;
  if (s.kind == SlopeKind::dominant) {
    const double scale = std::pow(h, s.exponent / 2.0) * std::sqrt(std::abs(s.c_inner * s.c_outer));
    return -(h / l) * std::log(2.0 * re / scale);
  }
  return -s.gamma * h * std::log(1.0 / h) + (h / (2.0 * l)) * std::log(std::abs(s.c_outer / s.c_inner));
}

long m_estimate(const ResonanceString& s, const DeltaSystem& system, Complex z) {
  const double theta = std::arg(Complex(log_argument(s), 0.0));
  const double h = system.h;
  return std::lround((z.real() + h / (2.0 * s.length) * theta) * s.length / (kPi * h));
}

}  // namespace resonance
