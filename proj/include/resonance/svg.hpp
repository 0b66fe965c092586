#pragma once

#include <string>
#include <vector>

#include "resonance/polygon.hpp"
#include "resonance/solver.hpp"
#include "resonance/theory.hpp"

namespace resonance {

/// Pair points, lower hull and slope labels.
std::string polygon_svg(const NewtonPolygon& polygon);

/// Zero contours of Re (red) and Im (blue), polished roots and theory curves
/// sampled at `curve_samples` points across the window.
std::string plot_svg(const SolveResult& solution, const std::vector<ResonanceString>& strings,
                     const DeltaSystem& system, std::size_t curve_samples = 512);

}  // namespace resonance
