#pragma once

// Configuration loading, the built-in example fixtures and the end-to-end
// pipeline polygon -> strings -> numeric roots -> matching -> statistics.

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "resonance/model.hpp"
#include "resonance/polygon.hpp"
#include "resonance/solver.hpp"
#include "resonance/theory.hpp"

namespace resonance {

using Json = nlohmann::ordered_json;

inline constexpr const char* kReportSchema = "resonance-report/1";

/// Where an expected value comes from: quoted in the published example, or
/// computed by hand from the example's data.
enum class Provenance { published, derived };

const char* to_string(Provenance provenance);

struct FixtureExpectation {
  std::vector<Rational> slopes;
  std::vector<PairIndex> dominant;  // all tied pairs for non-generic systems
  std::size_t string_count = 0;
  bool generic = true;
  Provenance provenance = Provenance::published;
};

struct Fixture {
  std::string name;
  std::string description;
  DeltaSystem system;
  std::optional<Window> window;
  std::optional<std::size_t> nx;
  std::optional<std::size_t> ny;
  FixtureExpectation expected;
};

const std::vector<Fixture>& builtin_fixtures();
/// nullptr when unknown.
const Fixture* find_fixture(std::string_view name);

struct RunConfig {
  DeltaSystem system;
  std::optional<Window> window;
  std::optional<std::size_t> nx;
  std::optional<std::size_t> ny;
  std::string source;
  std::vector<std::string> notices;  // e.g. deltas re-sorted by position
};

/// Throws ConfigError on malformed JSON, unknown keys or invalid systems.
RunConfig parse_config(std::string_view json_text, std::string source = "<inline>");
RunConfig load_config(const std::filesystem::path& path);
RunConfig fixture_config(const Fixture& fixture);

Json system_json(const DeltaSystem& system);
Json window_json(const Window& window);
/// {points, hull, slopes, dominant, partition, generic, violations,
///  coincidences, bounds}
Json polygon_json(const DeltaSystem& system, const NewtonPolygon& polygon);
Json strings_json(const std::vector<ResonanceString>& strings, const DeltaSystem& system);

/// string_id,kind,gamma,m,re,im
std::string predictions_csv(const std::vector<ResonanceString>& strings, const DeltaSystem& system,
                            const Window& window);
/// string_id,re,im sampled uniformly over the Re range.
std::string curves_csv(const std::vector<ResonanceString>& strings, const DeltaSystem& system,
                       const Window& window, std::size_t samples = 512);
/// re,im,residual,string_id,deviation,m_estimate
std::string resonances_csv(const std::vector<Resonance>& roots);

struct StringStatistics {
  std::size_t id = 0;
  std::string label;
  std::size_t count = 0;
  double mean_deviation = 0.0;
  double max_deviation = 0.0;
};

std::vector<StringStatistics> string_statistics(const std::vector<Resonance>& roots,
                                                const std::vector<ResonanceString>& strings);

struct RunOptions {
  bool allow_nongeneric = false;
  bool include_timing = false;  // timing breaks byte-identical output, so off by default
  bool solve = true;
  double match_tolerance_h = kDefaultMatchTolerance;
  std::optional<Window> window;
  std::optional<std::size_t> nx;
  std::optional<std::size_t> ny;
};

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitNonGeneric = 2;

struct RunReport {
  Json json;
  int exit_code = kExitOk;
  NewtonPolygon polygon;
  std::vector<ResonanceString> strings;
  std::optional<SolveResult> solution;
  std::vector<StringStatistics> statistics;
};

/// Non-generic systems stop after the polygon with exit code 2 unless
/// allow_nongeneric is set; they then get roots but no strings.
RunReport run_pipeline(const RunConfig& config, const RunOptions& options);

/// Window and grid after applying overrides, config values and defaults.
Window effective_window(const RunConfig& config, const RunOptions& options);
std::size_t effective_nx(const RunConfig& config, const RunOptions& options);
std::size_t effective_ny(const RunConfig& config, const RunOptions& options);

}  // namespace resonance
