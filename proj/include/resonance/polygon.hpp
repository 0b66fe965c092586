#pragma once

// Newton polygon of a delta system: lower convex hull of
//   {(2(x_k - x_j), beta_j + beta_k) : j < k} U {(0, 0)}
// computed in exact rational arithmetic. Its finite slopes are the decay
// rates gamma of the resonance strings.

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "resonance/model.hpp"
#include "resonance/rational.hpp"

namespace resonance {

struct PairPoint {
  Rational lambda;  // 2 (x_k - x_j)
  Rational nu;      // beta_j + beta_k
  std::optional<PairIndex> pair;  // nullopt marks the origin

  bool is_origin() const { return !pair.has_value(); }
};

enum class SlopeKind { dominant, flat };

const char* to_string(SlopeKind kind);

struct Slope {
  Rational gamma;
  SlopeKind kind = SlopeKind::flat;
  /// Attributed delta pair; absent only when the two hull vertices do not
  /// share exactly one index (non-generic systems).
  std::optional<PairIndex> pair;
  /// For flat slopes: the index dropped from the left vertex (closer to the
  /// dominant pair) and the one gained by the right vertex. For the dominant
  /// slope: inner = j, outer = k of the pair.
  std::optional<std::size_t> inner;
  std::optional<std::size_t> outer;
  std::size_t left = 0;   // position in NewtonPolygon::hull
  std::size_t right = 0;

  double value() const { return to_double(gamma); }
  /// "γ_12" or "γ̃_23"
  std::string label() const;
};

/// Labels that share one slope value on a non-generic hull, e.g.
/// γ̃_12 = γ̃_34.
struct SlopeCoincidence {
  Rational gamma;
  SlopeKind kind = SlopeKind::flat;
  std::vector<PairIndex> pairs;

  std::string describe() const;
};

struct GenericityReport {
  bool generic = true;
  /// (left vertex, right vertex, offending point) as indices into
  /// NewtonPolygon::points: three collinear boundary points.
  std::vector<std::array<std::size_t, 3>> violations;
  std::vector<SlopeCoincidence> coincidences;
};

struct NewtonPolygon {
  std::vector<PairPoint> points;   // origin first, then pairs in (j,k) order
  std::vector<std::size_t> hull;   // indices into points, origin first
  std::vector<Slope> slopes;       // one per hull segment, increasing gamma
  GenericityReport genericity;
  std::size_t delta_count = 0;

  const PairPoint& vertex(std::size_t hull_position) const { return points[hull[hull_position]]; }
};

/// Throws ConfigError for fewer than two deltas or an invalid system.
NewtonPolygon build_polygon(const DeltaSystem& system);

/// Γ in increasing order.
std::vector<Slope> slope_set(const NewtonPolygon& polygon);

struct DominantPair {
  std::vector<PairIndex> pairs;  // every minimiser; more than one => non-generic
  Rational gamma;

  bool unique() const { return pairs.size() == 1; }
  const PairIndex& primary() const { return pairs.front(); }
};

/// argmin over j<k of (beta_j + beta_k) / (2 (x_k - x_j)).
DominantPair dominant_pair(const DeltaSystem& system);

struct IntervalPartition {
  std::vector<std::size_t> indices;       // 0-based, 0 = j_1 < ... < j_n = N-1
  std::size_t dominant_position = 0;      // I: indices[I], indices[I+1] is the dominant pair
  std::vector<std::size_t> slope_positions;  // slope s spans indices[p], indices[p+1]
};

/// Throws NonGenericError for non-generic polygons and StructureError when
/// consecutive hull pairs are not nested with exactly one shared endpoint.
IntervalPartition interval_partition(const NewtonPolygon& polygon);

GenericityReport check_genericity(const DeltaSystem& system);

struct StringCountBounds {
  std::size_t n_minus_one = 0;
  std::size_t n_minus_k_plus_j = 0;  // N - K + J with 1-based J, K
};

StringCountBounds string_count_bound(const DeltaSystem& system);

/// Half-width of the gamma window around slope `slope_index` in which its two
/// endpoint terms stay strictly below every other exponent nu - gamma*lambda.
/// nullopt when no other line ever crosses (unbounded window).
std::optional<Rational> minimality_window(const NewtonPolygon& polygon, std::size_t slope_index);

}  // namespace resonance
