#pragma once

// Numerical resonance search: sample D~_N on a grid, trace the zero level
// sets of its real and imaginary parts by marching squares, intersect the
// two curve families and polish each crossing with Newton's method.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "resonance/determinant.hpp"
#include "resonance/model.hpp"
#include "resonance/theory.hpp"

namespace resonance {

inline constexpr std::size_t kMinGridSize = 16;
inline constexpr std::size_t kDefaultGridSize = 2500;
/// Boundary strip half-width in units of h.
inline constexpr double kBoundaryFraction = 0.03;
inline constexpr double kDefaultMatchTolerance = 5.0;  // in units of h

struct GridField {
  Window window;
  std::size_t nx = 0;
  std::size_t ny = 0;
  std::vector<double> re;         // row-major, index j * nx + i
  std::vector<double> im;
  std::vector<std::uint8_t> overflow;

  double x(std::size_t i) const { return window.re_min + window.width() * static_cast<double>(i) / static_cast<double>(nx - 1); }
  double y(std::size_t j) const { return window.im_min + window.height() * static_cast<double>(j) / static_cast<double>(ny - 1); }
  double dx() const { return window.width() / static_cast<double>(nx - 1); }
  double dy() const { return window.height() / static_cast<double>(ny - 1); }
  std::size_t index(std::size_t i, std::size_t j) const { return j * nx + i; }
};

/// Samples D~_N at uniform nodes (data-parallel, deterministic). Nodes where
/// the exponential guard trips are marked in `overflow`.
GridField sample_grid(const ReducedDeterminant& det, const Window& window, std::size_t nx, std::size_t ny);
GridField sample_grid(const DeltaSystem& system, const Window& window, std::size_t nx, std::size_t ny);
/// Same layout for an arbitrary function; non-finite values count as overflow.
GridField sample_function(const std::function<Complex(Complex)>& f, const Window& window, std::size_t nx,
                          std::size_t ny);

enum class Part { real, imag };

const char* to_string(Part part);

struct PlanarCurveSet {
  Part part = Part::real;
  std::vector<std::vector<Complex>> polylines;

  std::size_t vertex_count() const;
  std::size_t segment_count() const;
};

/// Marching squares on the sign field (zero counts as positive), linear
/// interpolation along cell edges. Saddle cells are split by the sign of the
/// mean of their four corners. Cells touching an overflowed node are skipped.
PlanarCurveSet extract_contours(const GridField& field, Part part);

/// Drops vertices within kBoundaryFraction * h of the window edges and splits
/// polylines at the gaps.
PlanarCurveSet filter_boundary(const PlanarCurveSet& curves, const Window& window, double h);

/// Transversal segment crossings between the two sets, using uniform spatial
/// bins, merged within `dedup_radius` and sorted by (Re, Im).
std::vector<Complex> intersect_curves(const PlanarCurveSet& a, const PlanarCurveSet& b, double dedup_radius);

struct Resonance {
  Complex z;
  double residual = 0.0;  // |D~_N(z)| / largest summand
  std::optional<std::size_t> matched_string;
  std::optional<double> deviation;
  std::optional<long> m_estimate;
  int iterations = 0;
};

struct RefineOptions {
  double tolerance = 1e-10;   // stop once the relative residual is below this
  double accept = 1e-8;       // accepted roots must reach this
  int max_iterations = 25;
  double window_slack = 0.10; // fraction by which the window is dilated
};

struct RefineResult {
  std::optional<Resonance> root;
  std::string diagnostic;  // reason for rejection, empty on success
};

/// Newton iteration with a central-difference derivative
/// (step 1e-7 * max(1, |z0|)).
RefineResult refine_root(const ReducedDeterminant& det, Complex z0, const Window& window,
                         const RefineOptions& options = {});

/// Assigns each root to the string whose theory curve is closest in Im z;
/// roots farther than `tolerance` from every curve stay unassigned.
void match_to_strings(std::vector<Resonance>& roots, const std::vector<ResonanceString>& strings,
                      const DeltaSystem& system, double tolerance);

/// Re in [0.1, 2]; Im in [-3h max(1, gamma_max log(1/h) / 2), 0].
Window default_window(const DeltaSystem& system);

struct SolveOptions {
  std::optional<Window> window;
  std::size_t nx = kDefaultGridSize;
  std::size_t ny = kDefaultGridSize;
  RefineOptions refine;
};

struct SolveResult {
  Window window;
  std::size_t nx = 0;
  std::size_t ny = 0;
  PlanarCurveSet real_curves;
  PlanarCurveSet imag_curves;
  std::vector<Complex> crossings;
  std::vector<Resonance> roots;      // sorted by (Re, Im)
  std::vector<std::string> rejected; // one diagnostic per dropped crossing
  std::size_t overflow_nodes = 0;
};

/// Throws ConfigError for invalid systems, windows or grid sizes.
SolveResult solve(const DeltaSystem& system, const SolveOptions& options);

}  // namespace resonance
