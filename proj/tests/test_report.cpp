#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <regex>
#include <sstream>

#include "resonance/errors.hpp"
#include "resonance/report.hpp"
#include "resonance/svg.hpp"

using namespace resonance;

namespace {

std::size_t count_of(const std::string& text, const std::string& needle) {
  std::size_t n = 0;
  for (auto pos = text.find(needle); pos != std::string::npos; pos = text.find(needle, pos + 1)) ++n;
  return n;
}

RunOptions quick(std::size_t nx = 192, std::size_t ny = 96) {
  RunOptions opts;
  opts.nx = nx;
  opts.ny = ny;
  return opts;
}

}  // namespace

TEST_CASE("built-in fixtures reproduce their expected polygons") {
  REQUIRE(builtin_fixtures().size() >= 13);
  for (const auto& f : builtin_fixtures()) {
    CAPTURE(f.name);
    const auto polygon = build_polygon(f.system);
    CHECK(polygon.genericity.generic == f.expected.generic);
    std::vector<Rational> slopes;
    for (const auto& s : polygon.slopes) slopes.push_back(s.gamma);
    std::sort(slopes.begin(), slopes.end());
    CHECK(slopes == f.expected.slopes);
    const auto dom = dominant_pair(f.system);
    CHECK(dom.primary() == f.expected.dominant.front());
    if (f.expected.generic) CHECK(strings_for(f.system).size() == f.expected.string_count);
  }
  CHECK(find_fixture("ex2.11"));
  CHECK_FALSE(find_fixture("ex0"));
}

TEST_CASE("specific fixture values") {
  const auto& ex211 = *find_fixture("ex2.11");
  CHECK(ex211.expected.slopes == std::vector<Rational>{Rational(1, 8), Rational(3, 8)});
  CHECK(ex211.expected.provenance == Provenance::published);
  CHECK(find_fixture("ex2.12d")->expected.string_count == 2);
  CHECK(find_fixture("ex2.12e")->expected.string_count == 3);
  CHECK(find_fixture("ex9.1")->expected.provenance == Provenance::derived);
  CHECK(std::string(to_string(Provenance::derived)) == "derived");
}

TEST_CASE("configuration parsing") {
  const auto cfg = parse_config(R"({"h": 0.1, "deltas": [
      {"x": 6, "beta": 2, "c": 1},
      {"x": "0", "beta": "1/2", "c": -1},
      {"x": 4, "beta": 0.5, "c": 1}],
    "window": {"re_min": 0.2, "re_max": 1.5, "im_min": -0.4, "im_max": 0},
    "grid": {"nx": 300}})");
  REQUIRE(cfg.system.size() == 3);
  CHECK(cfg.system.deltas[0].x_exact == Rational(0));
  CHECK(cfg.system.deltas[0].beta_exact == Rational(1, 2));
  CHECK(cfg.system.deltas[0].c == -1.0);
  CHECK(cfg.system.deltas[2].x == 6.0);
  REQUIRE(cfg.notices.size() == 1);
  CHECK(cfg.window->re_min == 0.2);
  CHECK(*cfg.nx == 300u);
  CHECK_FALSE(cfg.ny);
  CHECK(effective_ny(cfg, {}) == kDefaultGridSize);
  CHECK(effective_nx(cfg, quick()) == 192u);

  CHECK_THROWS_AS(parse_config("{"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"h": 0.1, "deltas": [], "colour": 1})"), ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 1, "w": 2}]})"), ConfigError);
  CHECK_THROWS_AS(run_pipeline(parse_config(R"({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 1}]})"), quick()),
                  ConfigError);
  CHECK_THROWS_AS(
      run_pipeline(parse_config(R"({"h": 2, "deltas": [{"x": 0, "beta": 1, "c": 1}, {"x": 1, "beta": 1, "c": 1}]})"),
                   quick()),
      ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"h": -0.1, "deltas": [{"x": 0, "beta": 1, "c": 1}, {"x": 1, "beta": 1, "c": 1}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 0}, {"x": 1, "beta": 1, "c": 1}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 1}, {"x": 0, "beta": 2, "c": 1}]})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 1}, {"x": 1, "beta": 1, "c": 1}],
      "window": {"re_min": -1, "re_max": 1, "im_min": -1, "im_max": 0}})"),
                  ConfigError);
  CHECK_THROWS_AS(parse_config(R"({"h": 0.1, "deltas": [{"x": 0, "beta": 1, "c": 1}, {"x": 1, "beta": 1, "c": 1}],
      "grid": {"nx": 4}})"),
                  ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.json"), ConfigError);
}

TEST_CASE("non-generic systems stop after the polygon") {
  const auto report = run_pipeline(fixture_config(*find_fixture("ex9.2")), quick());
  CHECK(report.exit_code == kExitNonGeneric);
  CHECK(report.json["status"] == "non-generic");
  CHECK_FALSE(report.json.contains("resonances"));
  CHECK(report.json["polygon"]["generic"] == false);
  const auto& coincidences = report.json["polygon"]["coincidences"];
  REQUIRE(coincidences.size() == 1);
  CHECK(coincidences[0] == "γ̃_12 = γ̃_34 = 3/4");

  auto allow = quick();
  allow.allow_nongeneric = true;
  const auto forced = run_pipeline(fixture_config(*find_fixture("ex9.2")), allow);
  CHECK(forced.exit_code == kExitOk);
  CHECK(forced.json["status"] == "non-generic-allowed");
  CHECK(forced.strings.empty());
  CHECK(forced.json.contains("resonances"));
}

TEST_CASE("three-string report") {
  const auto report = run_pipeline(fixture_config(*find_fixture("ex2.12c")), quick(384, 192));
  CHECK(report.exit_code == kExitOk);
  CHECK(report.json["schema"] == kReportSchema);
  REQUIRE(report.strings.size() == 3);
  REQUIRE(report.statistics.size() == 3);
  for (const auto& st : report.statistics) {
    CAPTURE(st.label);
    CHECK(st.count > 0);
    CHECK(st.mean_deviation < report.polygon.points.size() * 0.1);
  }
  CHECK(report.json["polygon"]["partition"].is_array());
  CHECK(report.json["strings"].size() == 3);
  CHECK(report.json["statistics"][0].contains("mean_deviation_over_h"));
  CHECK_FALSE(report.json.contains("timing"));
}

TEST_CASE("two-delta report") {
  const auto report = run_pipeline(fixture_config(*find_fixture("sec9-n2")), quick(256, 128));
  CHECK(report.strings.size() == 1);
  CHECK(report.json["strings"][0]["label"] == "γ_12");
  CHECK(report.json["strings"][0]["gamma"] == "1/3");
  CHECK(report.json["polygon"]["dominant"]["J"] == 1);
  CHECK(report.json["polygon"]["dominant"]["K"] == 2);
}

TEST_CASE("reports are byte-identical across runs") {
  const auto cfg = fixture_config(*find_fixture("ex2.11"));
  const auto a = run_pipeline(cfg, quick()).json.dump(2);
  const auto b = run_pipeline(cfg, quick()).json.dump(2);
  CHECK(a == b);
  auto timed = quick();
  timed.include_timing = true;
  CHECK(run_pipeline(cfg, timed).json.contains("timing"));
}

TEST_CASE("solve-free runs") {
  auto opts = quick();
  opts.solve = false;
  const auto report = run_pipeline(fixture_config(*find_fixture("ex2.11")), opts);
  CHECK(report.exit_code == kExitOk);
  CHECK_FALSE(report.solution);
  CHECK_FALSE(report.json.contains("resonances"));
  CHECK(report.json.contains("window"));
}

TEST_CASE("CSV output") {
  const auto& f = *find_fixture("ex2.11");
  const auto strings = strings_for(f.system);
  const Window w = default_window(f.system);
  const auto predictions = predictions_csv(strings, f.system, w);
  CHECK(predictions.rfind("string_id,kind,gamma,m,re,im\n", 0) == 0);
  CHECK(count_of(predictions, "\n") > 5);
  const auto curves = curves_csv(strings, f.system, w, 16);
  CHECK(count_of(curves, "\n") == 1 + 16 * strings.size());

  std::vector<Resonance> roots(2);
  roots[0].z = {1.0 / 3.0, -0.1};
  roots[0].residual = 1e-12;
  roots[0].matched_string = 0;
  roots[0].deviation = 0.5;
  roots[0].m_estimate = 4;
  roots[1].z = {0.5, -0.2};
  const auto csv = resonances_csv(roots);
  std::istringstream in(csv);
  std::string header, first, second;
  std::getline(in, header);
  std::getline(in, first);
  std::getline(in, second);
  CHECK(header == "re,im,residual,string_id,deviation,m_estimate");
  CHECK(first.rfind("0.33333333333333331,", 0) == 0);
  CHECK(second == "0.5,-0.20000000000000001,0,,,");
}

TEST_CASE("SVG output") {
  const auto& f = *find_fixture("ex2.11");
  const auto report = run_pipeline(fixture_config(f), quick());
  REQUIRE(report.solution);
  const auto svg = plot_svg(*report.solution, report.strings, f.system, 64);
  CHECK(svg.find("<svg") != std::string::npos);
  CHECK(svg.find("</svg>") != std::string::npos);
  CHECK(svg.find("id=\"contours-real\"") != std::string::npos);
  CHECK(svg.find("id=\"contours-imag\"") != std::string::npos);
  CHECK(svg.find("id=\"theory\"") != std::string::npos);
  CHECK(svg.find("id=\"roots\"") != std::string::npos);
  CHECK(count_of(svg, "<g") == count_of(svg, "</g>"));
  CHECK(count_of(svg, "<circle") == report.solution->roots.size());

  const auto poly = polygon_svg(report.polygon);
  CHECK(poly.find("<svg") != std::string::npos);
  CHECK(poly.find("</svg>") != std::string::npos);
  CHECK(count_of(poly, "<g") == count_of(poly, "</g>"));
}
