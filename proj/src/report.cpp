#include "resonance/report.hpp"

#include <chrono>
#include <fstream>
#include <set>
#include <sstream>

#include "resonance/errors.hpp"

namespace resonance {

namespace {

struct BarrierSpec {
  double x;
  double beta;
  double c;
};

DeltaSystem make_system(double h, std::initializer_list<BarrierSpec> specs) {
  DeltaSystem system;
  system.h = h;
  for (const auto& s : specs) system.deltas.push_back(DeltaBarrier::make(s.x, s.beta, s.c));
  return system;
}

std::vector<Rational> fractions(std::initializer_list<const char*> texts) {
  std::vector<Rational> out;
  for (const char* t : texts) out.push_back(parse_rational(t));
  return out;
}

PairIndex pair1(std::size_t j, std::size_t k) { return {j - 1, k - 1}; }

Fixture fixture(std::string name, std::string description, DeltaSystem system, std::vector<Rational> slopes,
                std::vector<PairIndex> dominant, bool generic, Provenance provenance) {
  Fixture f;
  f.name = std::move(name);
  f.description = std::move(description);
  f.system = std::move(system);
  f.expected.string_count = slopes.size();
  f.expected.slopes = std::move(slopes);
  f.expected.dominant = std::move(dominant);
  f.expected.generic = generic;
  f.expected.provenance = provenance;
  return f;
}

std::vector<Fixture> make_fixtures() {
  using P = Provenance;
  std::vector<Fixture> out;
  out.push_back(fixture("ex2.9", "equal strengths: only the outermost pair contributes",
                        make_system(0.1, {{0, 1, 1}, {0.5, 1, 1}, {2, 1, 1}, {3, 1, 1}, {6, 1, 1}}),
                        fractions({"1/6"}), {pair1(1, 5)}, true, P::published));
  out.push_back(fixture("ex2.10", "beta_j = 10^-j at unit spacing: the maximal N-1 strings",
                        make_system(0.1, {{0, 0.1, 1}, {1, 0.01, 1}, {2, 0.001, 1}, {3, 1e-4, 1}, {4, 1e-5, 1}}),
                        fractions({"11/200000", "9/20000", "9/2000", "9/200"}), {pair1(4, 5)}, true, P::published));
  out.push_back(fixture("ex2.11", "three deltas, two strings",
                        make_system(0.1, {{0, 0.5, 1}, {4, 0.5, 1}, {6, 2, 1}}), fractions({"1/8", "3/8"}),
                        {pair1(1, 2)}, true, P::published));
  out.push_back(fixture("ex2.12a", "equal strengths: interior deltas overshadowed",
                        make_system(0.1, {{0, 2, 1}, {2, 2, 1}, {5, 2, 1}, {6, 2, 1}}), fractions({"1/3"}),
                        {pair1(1, 4)}, true, P::published));
  out.push_back(fixture("ex2.12b", "weak third delta: two strings",
                        make_system(0.1, {{0, 2, 1}, {2, 2, 1}, {5, 0.5, 1}, {6, 2, 1}}), fractions({"1/4", "3/4"}),
                        {pair1(1, 3)}, true, P::published));
  out.push_back(fixture("ex2.12c", "weak middle pair: three strings",
                        make_system(0.1, {{0, 2, 1}, {2, 0.5, 1}, {5, 0.5, 1}, {6, 2, 1}}),
                        fractions({"1/6", "3/8", "3/4"}), {pair1(2, 3)}, true, P::published));
  out.push_back(fixture("ex2.12d", "strict inequality in the string-count bound",
                        make_system(0.1, {{0, 0.5, 1}, {3, 0.5, 1}, {4, 2, 1}, {6, 3, 1}}),
                        fractions({"1/6", "5/12"}), {pair1(1, 2)}, true, P::published));
  out.push_back(fixture("ex2.12e", "dominant pair at the left end: three strings",
                        make_system(0.1, {{0, 0.5, 1}, {3, 0.5, 1}, {5, 2, 1}, {6, 3, 1}}),
                        fractions({"1/6", "3/8", "1/2"}), {pair1(1, 2)}, true, P::published));
  out.push_back(fixture("ex9.1", "three strings with a very flat dominant string",
                        make_system(0.1, {{0, 0.05, 1}, {1, 0.05, 1}, {3, 2, 1}, {6, 6, 1}}),
                        fractions({"1/20", "39/80", "2/3"}), {pair1(1, 2)}, true, P::derived));
  out.push_back(fixture("ex9.2", "symmetric spacing: two flat slopes coincide",
                        make_system(0.1, {{1, 2, 1}, {2, 0.5, 1}, {5, 0.5, 1}, {6, 2, 1}}),
                        fractions({"1/6", "3/4"}), {pair1(2, 3)}, false, P::published));
  out.push_back(fixture("ex9.3", "asymmetric outer strengths restore genericity",
                        make_system(0.1, {{0, 1.5, 1}, {2, 0.5, 1}, {5, 0.5, 1}, {6, 2, 1}}),
                        fractions({"1/6", "1/4", "3/4"}), {pair1(2, 3)}, true, P::derived));
  out.push_back(fixture("ex9.4", "mixed-sign couplings C = (10, 1, -5, 1), h = 0.1",
                        make_system(0.1, {{0, 2, 10}, {2, 0.5, 1}, {5, 0.5, -5}, {6, 2, 1}}),
                        fractions({"1/6", "3/8", "3/4"}), {pair1(2, 3)}, true, P::derived));
  Fixture fine = fixture("ex9.4-h0.01", "mixed-sign couplings C = (10, 1, -5, 1), h = 0.01",
                         make_system(0.01, {{0, 2, 10}, {2, 0.5, 1}, {5, 0.5, -5}, {6, 2, 1}}),
                         fractions({"1/6", "3/8", "3/4"}), {pair1(2, 3)}, true, P::derived);
  fine.window = Window{0.1, 1.0, -0.052, 0.0};
  fine.nx = 3072;
  fine.ny = 512;
  out.push_back(fine);
  Fixture n2 = fixture("sec9-n2", "two deltas, l = 6, beta = 2, C = 1",
                       make_system(0.1, {{0, 2, 1}, {6, 2, 1}}), fractions({"1/3"}), {pair1(1, 2)}, true,
                       P::published);
  n2.window = Window{0.05, 2.0, -0.3, 0.0};
  out.push_back(n2);
  return out;
}

const std::set<std::string> kTopKeys{"h", "deltas", "window", "grid"};
const std::set<std::string> kDeltaKeys{"x", "beta", "c"};
const std::set<std::string> kWindowKeys{"re_min", "re_max", "im_min", "im_max"};
const std::set<std::string> kGridKeys{"nx", "ny"};

void reject_unknown(const nlohmann::json& object, const std::set<std::string>& allowed, const std::string& where) {
  if (!object.is_object()) throw ConfigError(where + " must be an object");
  for (const auto& [key, value] : object.items()) {
    if (!allowed.count(key)) throw ConfigError("unknown key '" + key + "' in " + where);
  }
}

const nlohmann::json& required(const nlohmann::json& object, const char* key, const std::string& where) {
  if (!object.contains(key)) throw ConfigError(where + " is missing '" + key + "'");
  return object.at(key);
}

double number_of(const nlohmann::json& value, const std::string& where) {
  if (value.is_number()) return value.get<double>();
  if (value.is_string()) return to_double(parse_rational(value.get<std::string>()));
  throw ConfigError(where + " must be a number");
}

Rational exact_of(const nlohmann::json& value, const std::string& where) {
  if (value.is_string()) return parse_rational(value.get<std::string>());
  if (value.is_number()) return rational_from_double(value.get<double>());
  throw ConfigError(where + " must be a number or a fraction string");
}

std::size_t grid_size_of(const nlohmann::json& value, const std::string& where) {
  if (!value.is_number_integer() || value.get<long long>() < static_cast<long long>(kMinGridSize)) {
    throw ConfigError(where + " must be an integer >= " + std::to_string(kMinGridSize));
  }
  return value.get<std::size_t>();
}

Json pair_json(const PairIndex& p) { return Json::array({p.j + 1, p.k + 1}); }

Json point_json(const PairPoint& p) {
  Json out;
  out["lambda"] = to_fraction_string(p.lambda);
  out["nu"] = to_fraction_string(p.nu);
  out["pair"] = p.pair ? pair_json(*p.pair) : Json(nullptr);
  return out;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::string csv_number(double v) { return format_double(v); }

}  // namespace

const char* to_string(Provenance provenance) {
  return provenance == Provenance::published ? "published" : "derived";
}

const std::vector<Fixture>& builtin_fixtures() {
  static const std::vector<Fixture> fixtures = make_fixtures();
  return fixtures;
}

const Fixture* find_fixture(std::string_view name) {
  for (const auto& f : builtin_fixtures()) {
    if (f.name == name) return &f;
  }
  return nullptr;
}

RunConfig parse_config(std::string_view json_text, std::string source) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ConfigError(source + ": malformed JSON: " + e.what());
  }
  reject_unknown(doc, kTopKeys, "configuration");

  RunConfig config;
  config.source = std::move(source);
  config.system.h = number_of(required(doc, "h", "configuration"), "h");

  const auto& deltas = required(doc, "deltas", "configuration");
  if (!deltas.is_array()) throw ConfigError("'deltas' must be an array");
  for (std::size_t j = 0; j < deltas.size(); ++j) {
    const std::string where = "deltas[" + std::to_string(j) + "]";
    reject_unknown(deltas[j], kDeltaKeys, where);
    const Rational x = exact_of(required(deltas[j], "x", where), where + ".x");
    const Rational beta = exact_of(required(deltas[j], "beta", where), where + ".beta");
    const double c = number_of(required(deltas[j], "c", where), where + ".c");
    config.system.deltas.push_back(DeltaBarrier::make_exact(x, beta, c));
  }

  bool reordered = false;
  config.system = sorted_by_position(std::move(config.system), &reordered);
  if (reordered) config.notices.push_back("deltas were not sorted by position and have been reordered");

  const auto violations = validate(config.system);
  if (!violations.empty()) {
    std::string what = "invalid delta system:";
    for (const auto& v : violations) what += std::string(" [") + to_string(v.kind) + "] " + v.message + ";";
    throw ConfigError(what);
  }

  if (doc.contains("window")) {
    const auto& w = doc.at("window");
    reject_unknown(w, kWindowKeys, "window");
    Window window;
    window.re_min = number_of(required(w, "re_min", "window"), "window.re_min");
    window.re_max = number_of(required(w, "re_max", "window"), "window.re_max");
    window.im_min = number_of(required(w, "im_min", "window"), "window.im_min");
    window.im_max = number_of(required(w, "im_max", "window"), "window.im_max");
    const auto wv = validate(window);
    if (!wv.empty()) throw ConfigError("invalid window: " + wv.front().message);
    config.window = window;
  }
  if (doc.contains("grid")) {
    const auto& g = doc.at("grid");
    reject_unknown(g, kGridKeys, "grid");
    if (g.contains("nx")) config.nx = grid_size_of(g.at("nx"), "grid.nx");
    if (g.contains("ny")) config.ny = grid_size_of(g.at("ny"), "grid.ny");
  }
  return config;
}

RunConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

RunConfig fixture_config(const Fixture& fixture) {
  RunConfig config;
  config.system = fixture.system;
  config.window = fixture.window;
  config.nx = fixture.nx;
  config.ny = fixture.ny;
  config.source = "fixture:" + fixture.name;
  return config;
}

Json system_json(const DeltaSystem& system) {
  Json out;
  out["h"] = system.h;
  Json deltas = Json::array();
  for (const auto& d : system.deltas) {
    Json item;
    item["x"] = d.x;
    item["beta"] = d.beta;
    item["c"] = d.c;
    item["x_exact"] = to_fraction_string(d.x_exact);
    item["beta_exact"] = to_fraction_string(d.beta_exact);
    deltas.push_back(item);
  }
  out["deltas"] = deltas;
  return out;
}

Json window_json(const Window& w) {
  Json out;
  out["re_min"] = w.re_min;
  out["re_max"] = w.re_max;
  out["im_min"] = w.im_min;
  out["im_max"] = w.im_max;
  return out;
}

Json polygon_json(const DeltaSystem& system, const NewtonPolygon& polygon) {
  Json out;
  Json points = Json::array();
  for (const auto& p : polygon.points) points.push_back(point_json(p));
  out["points"] = points;

  Json hull = Json::array();
  for (std::size_t h = 0; h < polygon.hull.size(); ++h) hull.push_back(point_json(polygon.vertex(h)));
  out["hull"] = hull;

  Json slopes = Json::array();
  for (std::size_t s = 0; s < polygon.slopes.size(); ++s) {
    const Slope& slope = polygon.slopes[s];
    Json item;
    item["gamma"] = to_fraction_string(slope.gamma);
    item["gamma_value"] = slope.value();
    item["kind"] = to_string(slope.kind);
    item["pair"] = slope.pair ? pair_json(*slope.pair) : Json(nullptr);
    item["label"] = slope.label();
    item["inner"] = slope.inner ? Json(*slope.inner + 1) : Json(nullptr);
    item["outer"] = slope.outer ? Json(*slope.outer + 1) : Json(nullptr);
    const auto eps = minimality_window(polygon, s);
    item["minimality_window"] = eps ? Json(to_fraction_string(*eps)) : Json(nullptr);
    slopes.push_back(item);
  }
  out["slopes"] = slopes;

  const DominantPair dom = dominant_pair(system);
  Json dominant;
  dominant["J"] = dom.primary().j + 1;
  dominant["K"] = dom.primary().k + 1;
  dominant["gamma"] = to_fraction_string(dom.gamma);
  dominant["gamma_value"] = to_double(dom.gamma);
  Json tied = Json::array();
  for (const auto& p : dom.pairs) tied.push_back(pair_json(p));
  dominant["pairs"] = tied;
  out["dominant"] = dominant;

  out["generic"] = polygon.genericity.generic;
  if (polygon.genericity.generic) {
    const IntervalPartition partition = interval_partition(polygon);
    Json indices = Json::array();
    for (std::size_t i : partition.indices) indices.push_back(i + 1);
    out["partition"] = indices;
    out["dominant_position"] = partition.dominant_position + 1;
  } else {
    out["partition"] = nullptr;
    out["dominant_position"] = nullptr;
  }

  Json violations = Json::array();
  for (const auto& v : polygon.genericity.violations) {
    Json triple = Json::array();
    for (std::size_t idx : v) triple.push_back(point_json(polygon.points[idx]));
    violations.push_back(triple);
  }
  out["violations"] = violations;
  Json coincidences = Json::array();
  for (const auto& c : polygon.genericity.coincidences) coincidences.push_back(c.describe());
  out["coincidences"] = coincidences;

  const StringCountBounds bounds = string_count_bound(system);
  Json b;
  b["slope_count"] = polygon.slopes.size();
  b["n_minus_one"] = bounds.n_minus_one;
  b["n_minus_k_plus_j"] = bounds.n_minus_k_plus_j;
  out["bounds"] = b;
  return out;
}

Json strings_json(const std::vector<ResonanceString>& strings, const DeltaSystem& system) {
  (void)system;
  Json out = Json::array();
  for (const auto& s : strings) {
    Json item;
    item["id"] = s.id;
    item["label"] = s.label();
    item["kind"] = to_string(s.kind);
    item["gamma"] = to_fraction_string(s.gamma_exact);
    item["gamma_value"] = s.gamma;
    item["pair"] = pair_json(s.pair);
    item["inner"] = s.inner + 1;
    item["outer"] = s.outer + 1;
    item["length"] = s.length;
    item["spacing"] = s.spacing;
    out.push_back(item);
  }
  return out;
}

std::string predictions_csv(const std::vector<ResonanceString>& strings, const DeltaSystem& system,
                            const Window& window) {
  std::string out = "string_id,kind,gamma,m,re,im\n";
  for (const auto& s : strings) {
    for (const auto& p : predict_points(s, system, window)) {
      out += std::to_string(s.id) + "," + to_string(s.kind) + "," + csv_number(s.gamma) + "," +
             std::to_string(p.m) + "," + csv_number(p.z.real()) + "," + csv_number(p.z.imag()) + "\n";
    }
  }
  return out;
}

std::string curves_csv(const std::vector<ResonanceString>& strings, const DeltaSystem& system,
                       const Window& window, std::size_t samples) {
  std::string out = "string_id,re,im\n";
  const std::size_t n = std::max<std::size_t>(samples, 2);
  for (const auto& s : strings) {
    for (std::size_t i = 0; i < n; ++i) {
      const double re = window.re_min + window.width() * static_cast<double>(i) / static_cast<double>(n - 1);
      out += std::to_string(s.id) + "," + csv_number(re) + "," + csv_number(theory_curve(s, system, re)) + "\n";
    }
  }
  return out;
}

std::string resonances_csv(const std::vector<Resonance>& roots) {
  std::string out = "re,im,residual,string_id,deviation,m_estimate\n";
  for (const auto& r : roots) {
    out += csv_number(r.z.real()) + "," + csv_number(r.z.imag()) + "," + csv_number(r.residual) + ",";
    out += (r.matched_string ? std::to_string(*r.matched_string) : std::string()) + ",";
    out += (r.deviation ? csv_number(*r.deviation) : std::string()) + ",";
    out += (r.m_estimate ? std::to_string(*r.m_estimate) : std::string()) + "\n";
  }
  return out;
}

std::vector<StringStatistics> string_statistics(const std::vector<Resonance>& roots,
                                                const std::vector<ResonanceString>& strings) {
  std::vector<StringStatistics> out;
  for (const auto& s : strings) {
    StringStatistics st;
    st.id = s.id;
    st.label = s.label();
    double sum = 0.0;
    for (const auto& r : roots) {
      if (r.matched_string != s.id || !r.deviation) continue;
      ++st.count;
      sum += *r.deviation;
      st.max_deviation = std::max(st.max_deviation, *r.deviation);
    }
    if (st.count) st.mean_deviation = sum / static_cast<double>(st.count);
    out.push_back(st);
  }
  return out;
}

Window effective_window(const RunConfig& config, const RunOptions& options) {
  if (options.window) return *options.window;
  if (config.window) return *config.window;
  return default_window(config.system);
}

std::size_t effective_nx(const RunConfig& config, const RunOptions& options) {
  return options.nx.value_or(config.nx.value_or(kDefaultGridSize));
}

std::size_t effective_ny(const RunConfig& config, const RunOptions& options) {
  return options.ny.value_or(config.ny.value_or(kDefaultGridSize));
}

RunReport run_pipeline(const RunConfig& config, const RunOptions& options) {
  const DeltaSystem& system = config.system;
  if (!(system.h < 1.0)) throw ConfigError("h must be below 1 for the semiclassical string formulas");
  RunReport report;
  Json& json = report.json;
  json["schema"] = kReportSchema;
  json["source"] = config.source;
  json["notices"] = config.notices;
  json["system"] = system_json(system);

  report.polygon = build_polygon(system);
  json["polygon"] = polygon_json(system, report.polygon);
  const bool generic = report.polygon.genericity.generic;
  if (!generic && !options.allow_nongeneric) {
    json["status"] = "non-generic";
    report.exit_code = kExitNonGeneric;
    return report;
  }
  if (generic) report.strings = strings_for(system);
  json["strings"] = strings_json(report.strings, system);

  const Window window = effective_window(config, options);
  json["window"] = window_json(window);
  if (options.solve) {
    SolveOptions solve_options;
    solve_options.window = window;
    solve_options.nx = effective_nx(config, options);
    solve_options.ny = effective_ny(config, options);
    json["grid"] = {{"nx", solve_options.nx}, {"ny", solve_options.ny}};

    const auto start = std::chrono::steady_clock::now();
    SolveResult solution = solve(system, solve_options);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    match_to_strings(solution.roots, report.strings, system, options.match_tolerance_h * system.h);
    report.statistics = string_statistics(solution.roots, report.strings);

    Json roots = Json::array();
    for (const auto& r : solution.roots) {
      Json item;
      item["re"] = r.z.real();
      item["im"] = r.z.imag();
      item["residual"] = r.residual;
      item["string_id"] = r.matched_string ? Json(*r.matched_string) : Json(nullptr);
      item["deviation"] = optional_number(r.deviation);
      item["m_estimate"] = r.m_estimate ? Json(*r.m_estimate) : Json(nullptr);
      roots.push_back(item);
    }
    json["resonances"] = roots;
    json["unmatched"] = std::count_if(solution.roots.begin(), solution.roots.end(),
                                      [](const Resonance& r) { return !r.matched_string; });
    json["rejected_crossings"] = solution.rejected.size();
    json["overflow_nodes"] = solution.overflow_nodes;

    Json stats = Json::array();
    for (std::size_t i = 0; i < report.statistics.size(); ++i) {
      const auto& st = report.statistics[i];
      Json item;
      item["string_id"] = st.id;
      item["label"] = st.label;
      item["count"] = st.count;
      item["predicted"] = predict_points(report.strings[i], system, window).size();
      item["mean_deviation"] = st.mean_deviation;
      item["max_deviation"] = st.max_deviation;
      item["mean_deviation_over_h"] = st.mean_deviation / system.h;
      stats.push_back(item);
    }
    json["statistics"] = stats;
    if (options.include_timing) json["timing"] = {{"solve_seconds", seconds}};
    report.solution = std::move(solution);
  }
  json["status"] = generic ? "ok" : "non-generic-allowed";
  return report;
}

}  // namespace resonance
