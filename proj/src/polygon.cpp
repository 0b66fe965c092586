#include "resonance/polygon.hpp"

#include <algorithm>
#include <map>
#include <set>

#include "resonance/errors.hpp"

namespace resonance {

namespace {

// > 0 for a counter-clockwise turn o -> a -> b.
Rational cross(const PairPoint& o, const PairPoint& a, const PairPoint& b) {
  return (a.lambda - o.lambda) * (b.nu - o.nu) - (a.nu - o.nu) * (b.lambda - o.lambda);
}

std::optional<std::size_t> shared_index(const PairIndex& a, const PairIndex& b, std::size_t* count) {
  std::size_t n = 0;
  std::optional<std::size_t> shared;
  for (std::size_t u : {a.j, a.k}) {
    for (std::size_t v : {b.j, b.k}) {
      if (u == v) {
        ++n;
        shared = u;
      }
    }
  }
  if (count) *count = n;
  return n == 1 ? shared : std::nullopt;
}

std::size_t other_index(const PairIndex& p, std::size_t shared) { return p.j == shared ? p.k : p.j; }

PairIndex ordered(std::size_t a, std::size_t b) { return a < b ? PairIndex{a, b} : PairIndex{b, a}; }

void require_buildable(const DeltaSystem& system) {
  auto violations = validate(system);
  if (!violations.empty()) {
    throw ConfigError("invalid delta system: " + violations.front().message);
  }
  if (system.size() < 2) throw ConfigError("the Newton polygon needs at least two deltas");
}

}  // namespace

const char* to_string(SlopeKind kind) { return kind == SlopeKind::dominant ? "dominant" : "flat"; }

std::string Slope::label() const {
  const std::string base = kind == SlopeKind::dominant ? "γ_" : "γ̃_";
  return pair ? base + pair->label() : base + "??";
}

std::string SlopeCoincidence::describe() const {
  const std::string base = kind == SlopeKind::dominant ? "γ_" : "γ̃_";
  std::string out;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    if (i) out += " = ";
    out += base + pairs[i].label();
  }
  return out + " = " + to_fraction_string(gamma);
}

NewtonPolygon build_polygon(const DeltaSystem& system) {
  require_buildable(system);
  const std::size_t n = system.size();

  NewtonPolygon poly;
  poly.delta_count = n;
  poly.points.push_back({Rational(0), Rational(0), std::nullopt});
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t k = j + 1; k < n; ++k) {
      const auto& a = system.deltas[j];
      const auto& b = system.deltas[k];
      poly.points.push_back({2 * (b.x_exact - a.x_exact), a.beta_exact + b.beta_exact, PairIndex{j, k}});
    }
  }

  // Lowest point per lambda; first in (j,k) order represents duplicates.
  std::map<Rational, std::size_t> lowest;
  for (std::size_t i = 0; i < poly.points.size(); ++i) {
    auto [it, inserted] = lowest.try_emplace(poly.points[i].lambda, i);
    if (!inserted && poly.points[i].nu < poly.points[it->second].nu) it->second = i;
  }

  for (const auto& [lambda, idx] : lowest) {
    while (poly.hull.size() >= 2 &&
           cross(poly.points[poly.hull[poly.hull.size() - 2]], poly.points[poly.hull.back()],
                 poly.points[idx]) <= 0) {
      poly.hull.pop_back();
    }
    poly.hull.push_back(idx);
  }

  for (std::size_t s = 0; s + 1 < poly.hull.size(); ++s) {
    const auto& a = poly.points[poly.hull[s]];
    const auto& b = poly.points[poly.hull[s + 1]];
    Slope slope;
    slope.gamma = (b.nu - a.nu) / (b.lambda - a.lambda);
    slope.left = s;
    slope.right = s + 1;
    if (a.is_origin()) {
      slope.kind = SlopeKind::dominant;
      slope.pair = b.pair;
      slope.inner = b.pair->j;
      slope.outer = b.pair->k;
    } else {
      slope.kind = SlopeKind::flat;
      if (auto shared = shared_index(*a.pair, *b.pair, nullptr)) {
        slope.inner = other_index(*a.pair, *shared);
        slope.outer = other_index(*b.pair, *shared);
        slope.pair = ordered(*slope.inner, *slope.outer);
      }
    }
    poly.slopes.push_back(slope);
  }

  // Collinear boundary points: anything other than the two endpoints lying on
  // a closed hull segment.
  auto& report = poly.genericity;
  for (std::size_t s = 0; s + 1 < poly.hull.size(); ++s) {
    const std::size_t ia = poly.hull[s];
    const std::size_t ib = poly.hull[s + 1];
    const auto& a = poly.points[ia];
    const auto& b = poly.points[ib];
    std::vector<std::size_t> on_segment{ia, ib};
    for (std::size_t ip = 0; ip < poly.points.size(); ++ip) {
      if (ip == ia || ip == ib) continue;
      const auto& p = poly.points[ip];
      if (p.lambda < a.lambda || p.lambda > b.lambda) continue;
      if (cross(a, b, p) != 0) continue;
      report.violations.push_back({ia, ib, ip});
      on_segment.push_back(ip);
    }
    if (on_segment.size() == 2) continue;

    SlopeCoincidence coincidence;
    coincidence.gamma = poly.slopes[s].gamma;
    std::set<PairIndex> labels;
    if (a.is_origin()) {
      coincidence.kind = SlopeKind::dominant;
      for (std::size_t ip : on_segment) {
        if (!poly.points[ip].is_origin()) labels.insert(*poly.points[ip].pair);
      }
    } else {
      coincidence.kind = SlopeKind::flat;
      for (std::size_t u : on_segment) {
        for (std::size_t v : on_segment) {
          const auto& pu = poly.points[u];
          const auto& pv = poly.points[v];
          if (!(pu.lambda < pv.lambda)) continue;
          if (auto shared = shared_index(*pu.pair, *pv.pair, nullptr)) {
            labels.insert(ordered(other_index(*pu.pair, *shared), other_index(*pv.pair, *shared)));
          }
        }
      }
    }
    coincidence.pairs.assign(labels.begin(), labels.end());
    report.coincidences.push_back(std::move(coincidence));
  }
  report.generic = report.violations.empty();
  return poly;
}

std::vector<Slope> slope_set(const NewtonPolygon& polygon) { return polygon.slopes; }

DominantPair dominant_pair(const DeltaSystem& system) {
  require_buildable(system);
  DominantPair best;
  bool first = true;
  for (std::size_t j = 0; j < system.size(); ++j) {
    for (std::size_t k = j + 1; k < system.size(); ++k) {
      const auto& a = system.deltas[j];
      const auto& b = system.deltas[k];
      const Rational gamma = (a.beta_exact + b.beta_exact) / (2 * (b.x_exact - a.x_exact));
      if (first || gamma < best.gamma) {
        best.gamma = gamma;
        best.pairs = {PairIndex{j, k}};
        first = false;
      } else if (gamma == best.gamma) {
        best.pairs.push_back(PairIndex{j, k});
      }
    }
  }
  return best;
}

IntervalPartition interval_partition(const NewtonPolygon& polygon) {
  if (!polygon.genericity.generic) {
    std::string what = "interval partition requires a generic polygon";
    for (const auto& c : polygon.genericity.coincidences) what += "; " + c.describe();
    throw NonGenericError(what);
  }
  std::set<std::size_t> indices;
  for (std::size_t h = 1; h < polygon.hull.size(); ++h) {
    const PairIndex& cur = *polygon.vertex(h).pair;
    indices.insert(cur.j);
    indices.insert(cur.k);
    if (h == 1) continue;
    const PairIndex& prev = *polygon.vertex(h - 1).pair;
    std::size_t shared_count = 0;
    shared_index(prev, cur, &shared_count);
    if (shared_count != 1) {
      throw StructureError("hull vertices " + prev.label() + " and " + cur.label() +
                           " do not share exactly one delta");
    }
    if (!(cur.j <= prev.j && prev.k <= cur.k)) {
      throw StructureError("hull intervals " + prev.label() + " and " + cur.label() + " are not nested");
    }
  }

  IntervalPartition out;
  out.indices.assign(indices.begin(), indices.end());
  if (out.indices.front() != 0 || out.indices.back() + 1 != polygon.delta_count) {
    throw StructureError("partition does not span the outermost deltas");
  }
  auto position_of = [&](std::size_t idx) {
    return static_cast<std::size_t>(std::find(out.indices.begin(), out.indices.end(), idx) - out.indices.begin());
  };
  for (const auto& slope : polygon.slopes) {
    if (!slope.pair) throw StructureError("slope without pair attribution on a generic hull");
    const std::size_t pj = position_of(slope.pair->j);
    const std::size_t pk = position_of(slope.pair->k);
    if (pk != pj + 1) {
      throw StructureError("slope " + slope.label() + " does not join consecutive partition indices");
    }
    out.slope_positions.push_back(pj);
    if (slope.kind == SlopeKind::dominant) out.dominant_position = pj;
  }
  return out;
}

GenericityReport check_genericity(const DeltaSystem& system) {
  if (system.size() < 2 && validate(system).empty()) return {};
  return build_polygon(system).genericity;
}

StringCountBounds string_count_bound(const DeltaSystem& system) {
  const auto dom = dominant_pair(system);
  const std::size_t n = system.size();
  return {n - 1, n - dom.primary().k + dom.primary().j};
}

std::optional<Rational> minimality_window(const NewtonPolygon& polygon, std::size_t slope_index) {
  const Slope& slope = polygon.slopes.at(slope_index);
  const std::size_t ia = polygon.hull[slope.left];
  const std::size_t ib = polygon.hull[slope.right];
  std::optional<Rational> best;
  for (std::size_t i = 0; i < polygon.points.size(); ++i) {
    if (i == ia || i == ib) continue;
    const auto& p = polygon.points[i];
    for (std::size_t e : {ia, ib}) {
      const auto& q = polygon.points[e];
      // (nu_p - gamma lambda_p) - (nu_q - gamma lambda_q) changes sign at
      // gamma = (nu_p - nu_q) / (lambda_p - lambda_q).
      const Rational dl = p.lambda - q.lambda;
      if (dl == 0) continue;
      const Rational crossing = (p.nu - q.nu) / dl;
      Rational distance = crossing - slope.gamma;
      if (distance < 0) distance = -distance;
      if (!best || distance < *best) best = distance;
    }
  }
  return best;
}

}  // namespace resonance
