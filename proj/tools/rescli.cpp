// rescli: command-line front end for the resonance library.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "resonance/determinant.hpp"
#include "resonance/errors.hpp"
#include "resonance/report.hpp"
#include "resonance/svg.hpp"

namespace fs = std::filesystem;
using namespace resonance;

namespace {

struct Options {
  std::string config;
  std::string fixture;
  std::string out;
  std::string format = "csv";
  std::string window;
  std::size_t nx = 0;
  std::size_t ny = 0;
  bool svg = false;
  bool allow_nongeneric = false;
  bool timing = false;
  double match_tol = kDefaultMatchTolerance;
  std::string z;
  std::string method = "closed";
};

void add_input(CLI::App* cmd, Options& o) {
  cmd->add_option("--config", o.config, "JSON configuration file");
  cmd->add_option("--fixture", o.fixture, "built-in fixture name (see `rescli fixtures`)");
  cmd->add_option("--out", o.out, "directory for output files (stdout when omitted)");
}

void add_solver(CLI::App* cmd, Options& o) {
  cmd->add_option("--nx", o.nx, "grid nodes along Re z")->check(CLI::Range(kMinGridSize, std::size_t{1} << 16));
  cmd->add_option("--ny", o.ny, "grid nodes along Im z")->check(CLI::Range(kMinGridSize, std::size_t{1} << 16));
  cmd->add_option("--window", o.window, "re_min,re_max,im_min,im_max");
  cmd->add_option("--match-tol", o.match_tol, "string matching tolerance in units of h");
  cmd->add_flag("--allow-nongeneric", o.allow_nongeneric, "solve non-generic systems without strings");
  cmd->add_flag("--timing", o.timing, "include wall-clock timing in JSON reports");
}

std::vector<double> parse_list(const std::string& text, std::size_t expected, const char* what) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(to_double(parse_rational(item)));
  if (out.size() != expected) {
    throw ConfigError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers");
  }
  return out;
}

RunConfig load_input(const Options& o) {
  if (!o.config.empty() && !o.fixture.empty()) throw ConfigError("use either --config or --fixture, not both");
  if (!o.fixture.empty()) {
    const Fixture* f = find_fixture(o.fixture);
    if (!f) throw ConfigError("unknown fixture '" + o.fixture + "'");
    return fixture_config(*f);
  }
  if (o.config.empty()) throw ConfigError("an input is required: --config FILE or --fixture NAME");
  RunConfig config = load_config(o.config);
  for (const auto& notice : config.notices) std::cerr << "notice: " << notice << "\n";
  return config;
}

RunOptions run_options(const Options& o) {
  RunOptions r;
  r.allow_nongeneric = o.allow_nongeneric;
  r.include_timing = o.timing;
  r.match_tolerance_h = o.match_tol;
  if (o.nx) r.nx = o.nx;
  if (o.ny) r.ny = o.ny;
  if (!o.window.empty()) {
    const auto v = parse_list(o.window, 4, "--window");
    Window w{v[0], v[1], v[2], v[3]};
    const auto violations = validate(w);
    if (!violations.empty()) throw ConfigError("invalid --window: " + violations.front().message);
    r.window = w;
  }
  return r;
}

void emit(const Options& o, const std::string& name, const std::string& content) {
  if (o.out.empty()) {
    std::cout << content;
    if (!content.empty() && content.back() != '\n') std::cout << "\n";
    return;
  }
  fs::create_directories(o.out);
  const fs::path path = fs::path(o.out) / name;
  std::ofstream file(path, std::ios::binary);
  if (!file) throw ConfigError("cannot write " + path.string());
  file << content;
  std::cerr << "wrote " << path.string() << "\n";
}

void require_format(const Options& o) {
  if (o.format != "csv" && o.format != "json") throw ConfigError("--format must be csv or json");
}

int cmd_fixtures(const Options& o) {
  Json list = Json::array();
  bool all_match = true;
  std::ostringstream text;
  for (const auto& f : builtin_fixtures()) {
    const NewtonPolygon polygon = build_polygon(f.system);
    const DominantPair dom = dominant_pair(f.system);
    std::vector<Rational> slopes;
    for (const auto& s : polygon.slopes) slopes.push_back(s.gamma);
    const bool match = slopes == f.expected.slopes && dom.pairs == f.expected.dominant &&
                       polygon.slopes.size() == f.expected.string_count &&
                       polygon.genericity.generic == f.expected.generic;
    all_match = all_match && match;

    Json item;
    item["name"] = f.name;
    item["description"] = f.description;
    item["h"] = f.system.h;
    item["N"] = f.system.size();
    Json gammas = Json::array();
    for (const auto& g : f.expected.slopes) gammas.push_back(to_fraction_string(g));
    Json dominant = Json::array();
    for (const auto& p : f.expected.dominant) dominant.push_back(Json::array({p.j + 1, p.k + 1}));
    item["expected"] = {{"slopes", gammas},
                        {"dominant", dominant},
                        {"string_count", f.expected.string_count},
                        {"generic", f.expected.generic},
                        {"provenance", to_string(f.expected.provenance)}};
    item["matches"] = match;
    list.push_back(item);

    text << f.name << "  N=" << f.system.size() << "  h=" << shortest_decimal(f.system.h) << "  Γ={";
    for (std::size_t i = 0; i < f.expected.slopes.size(); ++i) {
      text << (i ? ", " : "") << to_fraction_string(f.expected.slopes[i]);
    }
    text << "}  dominant=(" << f.expected.dominant.front().j + 1 << "," << f.expected.dominant.front().k + 1
         << ")  generic=" << (f.expected.generic ? "yes" : "no") << "  " << (match ? "ok" : "MISMATCH") << "\n";
  }
  emit(o, o.format == "json" ? "fixtures.json" : "fixtures.txt", o.format == "json" ? list.dump(2) : text.str());
  return all_match ? kExitOk : kExitConfig;
}

int cmd_polygon(const Options& o) {
  const RunConfig config = load_input(o);
  const NewtonPolygon polygon = build_polygon(config.system);
  Json json = polygon_json(config.system, polygon);
  emit(o, "polygon.json", json.dump(2));
  if (o.svg) {
    Options file_out = o;
    if (file_out.out.empty()) file_out.out = ".";
    emit(file_out, "polygon.svg", polygon_svg(polygon));
  }
  if (!polygon.genericity.generic) {
    for (const auto& c : polygon.genericity.coincidences) std::cerr << "non-generic: " << c.describe() << "\n";
    if (!o.allow_nongeneric) return kExitNonGeneric;
  }
  return kExitOk;
}

int cmd_predict(const Options& o) {
  require_format(o);
  const RunConfig config = load_input(o);
  const auto strings = strings_for(config.system);
  const Window window = effective_window(config, run_options(o));
  if (o.format == "json") {
    Json json;
    json["strings"] = strings_json(strings, config.system);
    Json points = Json::array();
    for (const auto& s : strings) {
      for (const auto& p : predict_points(s, config.system, window)) {
        points.push_back({{"string_id", p.string_id}, {"m", p.m}, {"re", p.z.real()}, {"im", p.z.imag()}});
      }
    }
    json["predictions"] = points;
    emit(o, "predictions.json", json.dump(2));
    return kExitOk;
  }
  if (o.out.empty()) {
    std::cout << predictions_csv(strings, config.system, window) << "\n"
              << curves_csv(strings, config.system, window);
  } else {
    emit(o, "predictions.csv", predictions_csv(strings, config.system, window));
    emit(o, "curves.csv", curves_csv(strings, config.system, window));
  }
  return kExitOk;
}

int report_nongeneric(const RunReport& report) {
  for (const auto& c : report.polygon.genericity.coincidences) std::cerr << "non-generic: " << c.describe() << "\n";
  std::cerr << "rerun with --allow-nongeneric to solve without string predictions\n";
  return report.exit_code;
}

int cmd_solve(const Options& o) {
  require_format(o);
  const RunConfig config = load_input(o);
  const RunReport report = run_pipeline(config, run_options(o));
  if (report.exit_code == kExitNonGeneric) {
    if (o.format == "json") emit(o, "report.json", report.json.dump(2));
    return report_nongeneric(report);
  }
  if (o.format == "json") {
    emit(o, "report.json", report.json.dump(2));
  } else {
    emit(o, "resonances.csv", resonances_csv(report.solution->roots));
  }
  if (o.svg) {
    Options file_out = o;
    if (file_out.out.empty()) file_out.out = ".";
    emit(file_out, "plot.svg", plot_svg(*report.solution, report.strings, config.system));
  }
  return kExitOk;
}

int cmd_compare(const Options& o) {
  const RunConfig config = load_input(o);
  const RunReport report = run_pipeline(config, run_options(o));
  Json json;
  json["schema"] = kReportSchema;
  json["source"] = config.source;
  json["generic"] = report.polygon.genericity.generic;
  if (report.exit_code == kExitNonGeneric) {
    json["coincidences"] = report.json["polygon"]["coincidences"];
    emit(o, "compare.json", json.dump(2));
    return report_nongeneric(report);
  }
  json["window"] = report.json["window"];
  json["grid"] = report.json["grid"];
  json["strings"] = report.json["strings"];
  json["statistics"] = report.json["statistics"];
  json["resonance_count"] = report.solution->roots.size();
  json["unmatched"] = report.json["unmatched"];
  if (report.json.contains("timing")) json["timing"] = report.json["timing"];
  emit(o, "compare.json", json.dump(2));
  return kExitOk;
}

int cmd_plot(const Options& o) {
  const RunConfig config = load_input(o);
  const RunReport report = run_pipeline(config, run_options(o));
  if (report.exit_code == kExitNonGeneric) return report_nongeneric(report);
  emit(o, "plot.svg", plot_svg(*report.solution, report.strings, config.system));
  return kExitOk;
}

int cmd_eval(const Options& o) {
  const RunConfig config = load_input(o);
  const auto zv = parse_list(o.z, 2, "--z");
  const Complex z(zv[0], zv[1]);
  const DeltaSystem& system = config.system;

  auto complex_json = [](Complex v) { return Json{{"re", v.real()}, {"im", v.imag()}}; };
  const Complex direct = reduced_from_direct(system, z);
  const Complex closed = closed_form(system, z).value;
  const Complex truncated = truncated_form(system, z);

  Complex value;
  Json json;
  json["z"] = complex_json(z);
  json["method"] = o.method;
  if (o.method == "direct") {
    value = direct;
    const DeterminantValue raw = direct_determinant(system, z);
    json["raw"] = {{"mantissa", complex_json(raw.value)}, {"scale_log", raw.scale_log}};
  } else if (o.method == "closed") {
    value = closed;
  } else if (o.method == "truncated") {
    value = truncated;
  } else {
    throw ConfigError("--method must be direct, closed or truncated");
  }
  json["value"] = complex_json(value);
  json["abs"] = std::abs(value);
  const Complex log_c = log_prefactor(system, z);
  json["log_prefactor"] = complex_json(log_c);
  auto rel = [&](Complex other) { return std::abs(value - other) / std::max(1.0, std::abs(other)); };
  json["relative_difference"] = {{"direct", rel(direct)}, {"closed", rel(closed)}, {"truncated", rel(truncated)}};
  emit(o, "eval.json", json.dump(2));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Resonances of semiclassical Dirac-delta barriers: Newton polygon, string predictions and "
               "numerical roots.\nEnvironment: RES_THREADS caps worker threads."};
  app.require_subcommand(1);
  Options o;

  auto* fixtures = app.add_subcommand("fixtures", "list built-in example systems and check their polygons");
  fixtures->add_option("--format", o.format, "csv (plain text) or json");
  fixtures->add_option("--out", o.out, "directory for output files");

  auto* polygon = app.add_subcommand("polygon", "Newton polygon, slope set, dominant pair and partition as JSON");
  add_input(polygon, o);
  polygon->add_flag("--svg", o.svg, "also write polygon.svg");
  polygon->add_flag("--allow-nongeneric", o.allow_nongeneric, "exit 0 for non-generic systems");

  auto* predict = app.add_subcommand("predict", "predicted string points and theory curves");
  add_input(predict, o);
  predict->add_option("--format", o.format, "csv or json");
  predict->add_option("--window", o.window, "re_min,re_max,im_min,im_max");

  auto* solve_cmd = app.add_subcommand("solve", "locate resonances numerically");
  add_input(solve_cmd, o);
  add_solver(solve_cmd, o);
  solve_cmd->add_option("--format", o.format, "csv (resonances) or json (full report)");
  solve_cmd->add_flag("--svg", o.svg, "also write plot.svg");

  auto* compare = app.add_subcommand("compare", "per-string agreement between roots and theory as JSON");
  add_input(compare, o);
  add_solver(compare, o);

  auto* plot = app.add_subcommand("plot", "SVG with contours, roots and theory curves");
  add_input(plot, o);
  add_solver(plot, o);

  auto* eval = app.add_subcommand("eval", "evaluate the determinant at one point");
  add_input(eval, o);
  eval->add_option("--z", o.z, "re,im")->required();
  eval->add_option("--method", o.method, "direct, closed or truncated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (fixtures->parsed()) return cmd_fixtures(o);
    if (polygon->parsed()) return cmd_polygon(o);
    if (predict->parsed()) return cmd_predict(o);
    if (solve_cmd->parsed()) return cmd_solve(o);
    if (compare->parsed()) return cmd_compare(o);
    if (plot->parsed()) return cmd_plot(o);
    if (eval->parsed()) return cmd_eval(o);
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NonGenericError& e) {
    std::cerr << "non-generic system: " << e.what() << "\n";
    return kExitNonGeneric;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
