#include "resonance/model.hpp"

#include <algorithm>
#include <cmath>

#include "resonance/errors.hpp"

namespace resonance {

std::string PairIndex::label() const { return std::to_string(j + 1) + std::to_string(k + 1); }

DeltaBarrier DeltaBarrier::make(double x, double beta, double c) {
  DeltaBarrier d;
  d.x = x;
  d.beta = beta;
  d.c = c;
  if (std::isfinite(x)) d.x_exact = rational_from_double(x);
  if (std::isfinite(beta)) d.beta_exact = rational_from_double(beta);
  return d;
}

DeltaBarrier DeltaBarrier::make_exact(const Rational& x, const Rational& beta, double c) {
  DeltaBarrier d;
  d.x = to_double(x);
  d.beta = to_double(beta);
  d.c = c;
  d.x_exact = x;
  d.beta_exact = beta;
  return d;
}

double DeltaSystem::coupling(std::size_t j) const {
  const auto& d = deltas.at(j);
  return d.c * std::pow(h, d.beta);
}

bool Window::contains(Complex z) const {
  return z.real() >= re_min && z.real() <= re_max && z.imag() >= im_min && z.imag() <= im_max;
}

Window Window::dilated(double fraction) const {
  const double dx = fraction * width();
  const double dy = fraction * height();
  return {re_min - dx, re_max + dx, im_min - dy, im_max + dy};
}

double Window::edge_distance(Complex z) const {
  return std::min({z.real() - re_min, re_max - z.real(), z.imag() - im_min, im_max - z.imag()});
}

const char* to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::h_nonpositive: return "h-nonpositive";
    case ViolationKind::no_deltas: return "no-deltas";
    case ViolationKind::non_finite: return "non-finite";
    case ViolationKind::positions_not_increasing: return "positions-not-increasing";
    case ViolationKind::beta_nonpositive: return "beta-nonpositive";
    case ViolationKind::coupling_zero: return "coupling-zero";
    case ViolationKind::window_empty: return "window-empty";
    case ViolationKind::window_re_nonpositive: return "window-re-nonpositive";
  }
  return "unknown";
}

std::vector<Violation> validate(const DeltaSystem& system) {
  std::vector<Violation> out;
  if (!std::isfinite(system.h)) {
    out.push_back({ViolationKind::non_finite, std::nullopt, "h is not finite"});
  } else if (!(system.h > 0.0)) {
    out.push_back({ViolationKind::h_nonpositive, std::nullopt, "h must be positive"});
  }
  if (system.deltas.empty()) {
    out.push_back({ViolationKind::no_deltas, std::nullopt, "at least one delta is required"});
  }
  for (std::size_t j = 0; j < system.deltas.size(); ++j) {
    const auto& d = system.deltas[j];
    const std::string where = "delta " + std::to_string(j + 1) + ": ";
    if (!std::isfinite(d.x) || !std::isfinite(d.beta) || !std::isfinite(d.c)) {
      out.push_back({ViolationKind::non_finite, j, where + "x, beta and c must be finite"});
      continue;
    }
    if (!(d.beta > 0.0)) {
      out.push_back({ViolationKind::beta_nonpositive, j, where + "beta must be positive"});
    }
    if (d.c == 0.0) {
      out.push_back({ViolationKind::coupling_zero, j, where + "c must be nonzero"});
    }
    if (j > 0 && std::isfinite(system.deltas[j - 1].x) && !(system.deltas[j - 1].x < d.x)) {
      out.push_back({ViolationKind::positions_not_increasing, j,
                     where + "position must exceed the previous one"});
    }
  }
  return out;
}

std::vector<Violation> validate(const Window& w) {
  std::vector<Violation> out;
  if (!std::isfinite(w.re_min) || !std::isfinite(w.re_max) || !std::isfinite(w.im_min) ||
      !std::isfinite(w.im_max)) {
    out.push_back({ViolationKind::non_finite, std::nullopt, "window bounds must be finite"});
    return out;
  }
  if (!(w.re_min < w.re_max) || !(w.im_min < w.im_max)) {
    out.push_back({ViolationKind::window_empty, std::nullopt, "window bounds must satisfy min < max"});
  }
  if (!(w.re_min > 0.0)) {
    out.push_back({ViolationKind::window_re_nonpositive, std::nullopt, "window re_min must be positive"});
  }
  return out;
}

std::optional<Complex> omega_pow(const DeltaSystem& system, Complex z, double lambda) {
  // i z lambda / h = (-Im z + i Re z) lambda / h
  const double log_mag = -z.imag() * lambda / system.h;
  if (log_mag > kOverflowExponent) return std::nullopt;
  return std::polar(std::exp(log_mag), z.real() * lambda / system.h);
}

namespace {

Complex pole_denominator(const DeltaSystem& system, std::size_t j, Complex z) {
  const Complex denom = Complex(0.0, 2.0) * z - system.coupling(j);
  if (std::abs(denom) < kPoleTolerance) {
    throw PoleError("z is on the pole of R/T for delta " + std::to_string(j + 1));
  }
  return denom;
}

}  // namespace

Complex reflection_r(const DeltaSystem& system, std::size_t j, Complex z) {
  return system.coupling(j) / pole_denominator(system, j, z);
}

Complex transmission_t(const DeltaSystem& system, std::size_t j, Complex z) {
  return Complex(0.0, 2.0) * z / pole_denominator(system, j, z);
}

DeltaSystem sorted_by_position(DeltaSystem system, bool* reordered) {
  const bool sorted = std::is_sorted(system.deltas.begin(), system.deltas.end(),
                                     [](const auto& a, const auto& b) { return a.x < b.x; });
  if (!sorted) {
    std::stable_sort(system.deltas.begin(), system.deltas.end(),
                     [](const auto& a, const auto& b) { return a.x < b.x; });
  }
  if (reordered) *reordered = !sorted;
  return system;
}

}  // namespace resonance
