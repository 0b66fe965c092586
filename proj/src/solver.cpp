#include "resonance/solver.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

#include "resonance/errors.hpp"
#include "resonance/parallel.hpp"
#include "resonance/polygon.hpp"

namespace resonance {

namespace {

void require_grid(const Window& window, std::size_t nx, std::size_t ny) {
  if (nx < kMinGridSize || ny < kMinGridSize) {
    throw ConfigError("grid must be at least " + std::to_string(kMinGridSize) + " nodes per axis");
  }
  const auto violations = validate(window);
  if (!violations.empty()) throw ConfigError("invalid window: " + violations.front().message);
}

GridField empty_field(const Window& window, std::size_t nx, std::size_t ny) {
  GridField field;
  field.window = window;
  field.nx = nx;
  field.ny = ny;
  field.re.assign(nx * ny, 0.0);
  field.im.assign(nx * ny, 0.0);
  field.overflow.assign(nx * ny, 0);
  return field;
}

template <class Eval>
GridField sample_with(const Window& window, std::size_t nx, std::size_t ny, Eval&& eval) {
  require_grid(window, nx, ny);
  GridField field = empty_field(window, nx, ny);
  parallel_blocks(ny, [&](std::size_t j0, std::size_t j1) {
    for (std::size_t j = j0; j < j1; ++j) {
      for (std::size_t i = 0; i < nx; ++i) {
        const std::size_t at = field.index(i, j);
        const auto v = eval(Complex(field.x(i), field.y(j)));
        if (!v || !std::isfinite(v->real()) || !std::isfinite(v->imag())) {
          field.overflow[at] = 1;
          continue;
        }
        field.re[at] = v->real();
        field.im[at] = v->imag();
      }
    }
  });
  return field;
}

double cross2(Complex a, Complex b) { return a.real() * b.imag() - a.imag() * b.real(); }

struct ContourNode {
  Complex point;
  std::int64_t next[2] = {-1, -1};
  int degree = 0;
};

bool less_re_im(Complex a, Complex b) {
  return a.real() < b.real() || (a.real() == b.real() && a.imag() < b.imag());
}

// Keeps the first of any points closer than `radius`; input sorted by Re.
template <class T, class Pos>
std::vector<T> dedup_sorted(const std::vector<T>& sorted, double radius, Pos pos) {
  std::vector<T> out;
  for (const T& item : sorted) {
    bool duplicate = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (pos(item).real() - pos(*it).real() > radius) break;
      if (std::abs(pos(item) - pos(*it)) <= radius) {
        duplicate = true;
        break;
      }
    }
    if (!duplicate) out.push_back(item);
  }
  return out;
}

}  // namespace

GridField sample_grid(const ReducedDeterminant& det, const Window& window, std::size_t nx, std::size_t ny) {
  return sample_with(window, nx, ny, [&](Complex z) -> std::optional<Complex> {
    try {
      const auto e = det.evaluate(z);
      if (e.overflow) return std::nullopt;
      return e.value;
    } catch (const PoleError&) {
      return std::nullopt;
    }
  });
}

GridField sample_grid(const DeltaSystem& system, const Window& window, std::size_t nx, std::size_t ny) {
  return sample_grid(ReducedDeterminant(system), window, nx, ny);
}

GridField sample_function(const std::function<Complex(Complex)>& f, const Window& window, std::size_t nx,
                          std::size_t ny) {
  return sample_with(window, nx, ny, [&](Complex z) -> std::optional<Complex> { return f(z); });
}

const char* to_string(Part part) { return part == Part::real ? "real" : "imag"; }

std::size_t PlanarCurveSet::vertex_count() const {
  std::size_t n = 0;
  for (const auto& p : polylines) n += p.size();
  return n;
}

std::size_t PlanarCurveSet::segment_count() const {
  std::size_t n = 0;
  for (const auto& p : polylines) n += p.empty() ? 0 : p.size() - 1;
  return n;
}

PlanarCurveSet extract_contours(const GridField& field, Part part) {
  const std::vector<double>& v = part == Part::real ? field.re : field.im;
  const std::size_t nx = field.nx;
  const std::size_t ny = field.ny;

  auto node = [&](std::size_t i, std::size_t j) { return Complex(field.x(i), field.y(j)); };
  auto h_edge = [&](std::size_t i, std::size_t j) { return static_cast<std::int64_t>(2 * (j * nx + i)); };
  auto v_edge = [&](std::size_t i, std::size_t j) { return static_cast<std::int64_t>(2 * (j * nx + i) + 1); };

  std::unordered_map<std::int64_t, ContourNode> nodes;
  auto crossing = [&](std::int64_t id, std::size_t ia, std::size_t ja, std::size_t ib, std::size_t jb) {
    auto [it, inserted] = nodes.try_emplace(id);
    if (inserted) {
      const double va = v[field.index(ia, ja)];
      const double vb = v[field.index(ib, jb)];
      const double t = va / (va - vb);
      it->second.point = node(ia, ja) + t * (node(ib, jb) - node(ia, ja));
    }
  };
  auto link = [&](std::int64_t a, std::int64_t b) {
    ContourNode& na = nodes[a];
    ContourNode& nb = nodes[b];
    if (na.degree < 2) na.next[na.degree++] = b;
    if (nb.degree < 2) nb.next[nb.degree++] = a;
  };

  for (std::size_t j = 0; j + 1 < ny; ++j) {
    for (std::size_t i = 0; i + 1 < nx; ++i) {
      const std::size_t c0 = field.index(i, j), c1 = field.index(i + 1, j);
      const std::size_t c2 = field.index(i + 1, j + 1), c3 = field.index(i, j + 1);
      if (field.overflow[c0] || field.overflow[c1] || field.overflow[c2] || field.overflow[c3]) continue;
      const bool s0 = v[c0] >= 0.0, s1 = v[c1] >= 0.0, s2 = v[c2] >= 0.0, s3 = v[c3] >= 0.0;
      const bool bottom = s0 != s1, right = s1 != s2, top = s2 != s3, left = s3 != s0;
      if (!(bottom || right || top || left)) continue;

      const std::int64_t eb = h_edge(i, j), er = v_edge(i + 1, j), et = h_edge(i, j + 1), el = v_edge(i, j);
      if (bottom) crossing(eb, i, j, i + 1, j);
      if (right) crossing(er, i + 1, j, i + 1, j + 1);
      if (top) crossing(et, i, j + 1, i + 1, j + 1);
      if (left) crossing(el, i, j, i, j + 1);

      if (bottom && right && top && left) {
        const bool center = (v[c0] + v[c1] + v[c2] + v[c3]) / 4.0 >= 0.0;
        if (center == s0) {
          // Corners 0 and 2 join through the centre: cut off corners 1 and 3.
          link(eb, er);
          link(et, el);
        } else {
          link(el, eb);
          link(er, et);
        }
        continue;
      }
      std::int64_t ends[2];
      int n = 0;
      for (auto [on, id] : {std::pair{bottom, eb}, std::pair{right, er}, std::pair{top, et}, std::pair{left, el}}) {
        if (on) ends[n++] = id;
      }
      link(ends[0], ends[1]);
    }
  }

  std::vector<std::int64_t> ids;
  ids.reserve(nodes.size());
  for (const auto& [id, n] : nodes) ids.push_back(id);
  std::sort(ids.begin(), ids.end());

  PlanarCurveSet out;
  out.part = part;
  std::unordered_map<std::int64_t, bool> visited;
  visited.reserve(nodes.size());
  auto walk = [&](std::int64_t start) {
    std::vector<Complex> line;
    std::int64_t cur = start;
    while (cur >= 0) {
      visited[cur] = true;
      const ContourNode& n = nodes.at(cur);
      line.push_back(n.point);
      std::int64_t next = -1;
      for (int d = 0; d < n.degree; ++d) {
        if (!visited[n.next[d]]) {
          next = n.next[d];
          break;
        }
      }
      if (next < 0) {
        const ContourNode& first = nodes.at(start);
        const bool closes = n.degree == 2 && first.degree == 2 && cur != start &&
                            (n.next[0] == start || n.next[1] == start);
        if (closes && line.size() > 2) line.push_back(first.point);
      }
      cur = next;
    }
    if (line.size() >= 2) out.polylines.push_back(std::move(line));
  };
  for (std::int64_t id : ids) {
    if (nodes.at(id).degree == 1 && !visited[id]) walk(id);
  }
  for (std::int64_t id : ids) {
    if (!visited[id]) walk(id);
  }
  return out;
}

PlanarCurveSet filter_boundary(const PlanarCurveSet& curves, const Window& window, double h) {
  const double eps = kBoundaryFraction * h;
  PlanarCurveSet out;
  out.part = curves.part;
  for (const auto& line : curves.polylines) {
    std::vector<Complex> piece;
    for (const Complex& p : line) {
      if (window.edge_distance(p) >= eps) {
        piece.push_back(p);
        continue;
      }
      if (piece.size() >= 2) out.polylines.push_back(std::move(piece));
      piece.clear();
    }
    if (piece.size() >= 2) out.polylines.push_back(std::move(piece));
  }
  return out;
}

std::vector<Complex> intersect_curves(const PlanarCurveSet& a, const PlanarCurveSet& b, double dedup_radius) {
  struct Segment {
    Complex p, q;
  };
  auto segments_of = [](const PlanarCurveSet& set) {
    std::vector<Segment> segs;
    for (const auto& line : set.polylines) {
      for (std::size_t i = 0; i + 1 < line.size(); ++i) segs.push_back({line[i], line[i + 1]});
    }
    return segs;
  };
  const std::vector<Segment> sa = segments_of(a);
  const std::vector<Segment> sb = segments_of(b);
  if (sa.empty() || sb.empty()) return {};

  double x0 = sb[0].p.real(), x1 = x0, y0 = sb[0].p.imag(), y1 = y0;
  for (const auto& s : sb) {
    for (Complex c : {s.p, s.q}) {
      x0 = std::min(x0, c.real());
      x1 = std::max(x1, c.real());
      y0 = std::min(y0, c.imag());
      y1 = std::max(y1, c.imag());
    }
  }
  const std::size_t bins = std::clamp<std::size_t>(static_cast<std::size_t>(std::sqrt(static_cast<double>(sb.size()))), 1, 2048);
  const double bw = std::max((x1 - x0) / static_cast<double>(bins), 1e-300);
  const double bh = std::max((y1 - y0) / static_cast<double>(bins), 1e-300);
  auto bin_x = [&](double x) {
    return static_cast<std::size_t>(std::clamp((x - x0) / bw, 0.0, static_cast<double>(bins - 1)));
  };
  auto bin_y = [&](double y) {
    return static_cast<std::size_t>(std::clamp((y - y0) / bh, 0.0, static_cast<double>(bins - 1)));
  };

  std::vector<std::vector<std::uint32_t>> grid(bins * bins);
  for (std::uint32_t s = 0; s < sb.size(); ++s) {
    const auto& seg = sb[s];
    const std::size_t ix0 = bin_x(std::min(seg.p.real(), seg.q.real()));
    const std::size_t ix1 = bin_x(std::max(seg.p.real(), seg.q.real()));
    const std::size_t iy0 = bin_y(std::min(seg.p.imag(), seg.q.imag()));
    const std::size_t iy1 = bin_y(std::max(seg.p.imag(), seg.q.imag()));
    for (std::size_t iy = iy0; iy <= iy1; ++iy) {
      for (std::size_t ix = ix0; ix <= ix1; ++ix) grid[iy * bins + ix].push_back(s);
    }
  }

  const std::size_t blocks = std::max<std::size_t>(1, std::min<std::size_t>(64, sa.size()));
  std::vector<std::vector<Complex>> found(blocks);
  const std::size_t per_block = (sa.size() + blocks - 1) / blocks;
  parallel_blocks(blocks, [&](std::size_t b0, std::size_t b1) {
    std::vector<std::size_t> stamp(sb.size(), static_cast<std::size_t>(-1));
    for (std::size_t blk = b0; blk < b1; ++blk) {
      const std::size_t lo = blk * per_block;
      const std::size_t hi = std::min(sa.size(), lo + per_block);
      for (std::size_t s = lo; s < hi; ++s) {
        const auto& seg = sa[s];
        const double minx = std::min(seg.p.real(), seg.q.real()), maxx = std::max(seg.p.real(), seg.q.real());
        const double miny = std::min(seg.p.imag(), seg.q.imag()), maxy = std::max(seg.p.imag(), seg.q.imag());
        if (maxx < x0 || minx > x1 || maxy < y0 || miny > y1) continue;
        for (std::size_t iy = bin_y(miny); iy <= bin_y(maxy); ++iy) {
          for (std::size_t ix = bin_x(minx); ix <= bin_x(maxx); ++ix) {
            for (std::uint32_t other : grid[iy * bins + ix]) {
              if (stamp[other] == s) continue;
              stamp[other] = s;
              const Complex r = seg.q - seg.p;
              const Complex t_vec = sb[other].q - sb[other].p;
              const double denom = cross2(r, t_vec);
              if (denom == 0.0) continue;
              const Complex d = sb[other].p - seg.p;
              const double t = cross2(d, t_vec) / denom;
              const double u = cross2(d, r) / denom;
              if (t < 0.0 || t > 1.0 || u < 0.0 || u > 1.0) continue;
              found[blk].push_back(seg.p + t * r);
            }
          }
        }
      }
    }
  });

  std::vector<Complex> all;
  for (const auto& f : found) all.insert(all.end(), f.begin(), f.end());
  std::sort(all.begin(), all.end(), less_re_im);
  return dedup_sorted(all, dedup_radius, [](Complex z) { return z; });
}

RefineResult refine_root(const ReducedDeterminant& det, Complex z0, const Window& window,
                         const RefineOptions& options) {
  const Window outer = window.dilated(options.window_slack);
  auto reject = [&](const std::string& why) {
    return RefineResult{std::nullopt, why + " (start " + format_double(z0.real()) + ", " +
                                          format_double(z0.imag()) + ")"};
  };
  if (!outer.contains(z0)) return reject("start outside the search window");

  const double step = 1e-7 * std::max(1.0, std::abs(z0));
  Complex z = z0;
  try {
    auto e = det.evaluate(z);
    if (e.overflow) return reject("overflow at start");
    double residual = std::abs(e.value) / e.max_term;
    int iterations = 0;
    while (residual >= options.tolerance && iterations < options.max_iterations) {
      const auto fp = det.evaluate(z + step);
      const auto fm = det.evaluate(z - step);
      if (fp.overflow || fm.overflow) return reject("overflow in derivative");
      const Complex slope = (fp.value - fm.value) / (2.0 * step);
      if (slope == Complex(0.0, 0.0) || !std::isfinite(std::abs(slope))) return reject("vanishing derivative");
      z -= e.value / slope;
      ++iterations;
      if (!outer.contains(z)) return reject("iterate left the search window");
      e = det.evaluate(z);
      if (e.overflow) return reject("overflow during iteration");
      residual = std::abs(e.value) / e.max_term;
    }
    if (!(residual < options.accept)) return reject("no convergence, residual " + format_double(residual));
    if (z.imag() > 0.0) return reject("converged to Im z > 0");
    Resonance root;
    root.z = z;
    root.residual = residual;
    root.iterations = iterations;
    return {root, {}};
  } catch (const PoleError&) {
    return reject("hit a pole of R/T");
  }
}

void match_to_strings(std::vector<Resonance>& roots, const std::vector<ResonanceString>& strings,
                      const DeltaSystem& system, double tolerance) {
  for (auto& root : roots) {
    root.matched_string.reset();
    root.deviation.reset();
    root.m_estimate.reset();
    if (strings.empty() || !(root.z.real() > 0.0)) continue;
    std::size_t best = 0;
    double best_dev = std::abs(root.z.imag() - theory_curve(strings[0], system, root.z.real()));
    for (std::size_t s = 1; s < strings.size(); ++s) {
      const double dev = std::abs(root.z.imag() - theory_curve(strings[s], system, root.z.real()));
      if (dev < best_dev) {
        best_dev = dev;
        best = s;
      }
    }
    if (best_dev > tolerance) continue;
    root.matched_string = strings[best].id;
    root.deviation = best_dev;
    root.m_estimate = m_estimate(strings[best], system, root.z);
  }
}

Window default_window(const DeltaSystem& system) {
  Window w;
  w.re_min = 0.1;
  w.re_max = 2.0;
  double gamma_max = 0.0;
  if (system.size() >= 2 && validate(system).empty()) {
    const auto polygon = build_polygon(system);
    if (!polygon.slopes.empty()) gamma_max = polygon.slopes.back().value();
  }
  const double h = system.h;
  w.im_min = -3.0 * h * std::max(1.0, gamma_max * std::log(1.0 / h) / 2.0);
  w.im_max = 0.0;
  return w;
}

SolveResult solve(const DeltaSystem& system, const SolveOptions& options) {
  const auto violations = validate(system);
  if (!violations.empty()) throw ConfigError("invalid delta system: " + violations.front().message);
  SolveResult result;
  result.window = options.window.value_or(default_window(system));
  result.nx = options.nx;
  result.ny = options.ny;
  require_grid(result.window, options.nx, options.ny);

  const ReducedDeterminant det(system);
  const GridField field = sample_grid(det, result.window, options.nx, options.ny);
  result.overflow_nodes = static_cast<std::size_t>(std::count(field.overflow.begin(), field.overflow.end(), 1));
  result.real_curves = filter_boundary(extract_contours(field, Part::real), result.window, system.h);
  result.imag_curves = filter_boundary(extract_contours(field, Part::imag), result.window, system.h);

  const double radius = 0.25 * std::min(field.dx(), field.dy());
  result.crossings = intersect_curves(result.real_curves, result.imag_curves, radius);

  std::vector<RefineResult> refined(result.crossings.size());
  parallel_blocks(refined.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) refined[i] = refine_root(det, result.crossings[i], result.window, options.refine);
  });

  std::vector<Resonance> roots;
  for (auto& r : refined) {
    if (r.root) {
      roots.push_back(*r.root);
    } else {
      result.rejected.push_back(std::move(r.diagnostic));
    }
  }
  std::sort(roots.begin(), roots.end(), [](const Resonance& a, const Resonance& b) {
    if (a.z.real() != b.z.real()) return a.z.real() < b.z.real();
    if (a.z.imag() != b.z.imag()) return a.z.imag() < b.z.imag();
    return a.residual < b.residual;
  });
  roots = dedup_sorted(roots, radius, [](const Resonance& r) { return r.z; });

  const double eps = kBoundaryFraction * system.h;
  for (auto& root : roots) {
    if (result.window.edge_distance(root.z) < eps) {
      result.rejected.push_back("polished root within the boundary strip at (" + format_double(root.z.real()) +
                                ", " + format_double(root.z.imag()) + ")");
    } else {
      result.roots.push_back(root);
    }
  }
  return result;
}

}  // namespace resonance
