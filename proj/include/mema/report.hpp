#pragma once

// Stable text formats: front CSV, run configuration, run summary JSON.
// Numbers are written with %.12g and lines end in '\n'.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "mema/engine.hpp"

namespace mema {

/// Malformed CSV or JSON input.
struct FormatError : Error {
  using Error::Error;
};

/// printf("%.12g").
std::string format_number(double v);

/// `v` after a round trip through `format_number`, so JSON output carries
/// the same digits as the CSV files.
double rounded(double v);

struct FrontRow {
  ObjectiveVector objectives;
  std::string genotype;
};

/// Header `z1,z2,genotype` (z3 etc. for more objectives), rows sorted by
/// objectives then genotype.
std::string front_csv(std::vector<FrontRow> rows);

/// Objective columns of a front CSV; the genotype column is ignored.
std::vector<ObjectiveVector> parse_front_csv(std::string_view text);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, std::string_view text);

struct RunConfig {
  std::filesystem::path instance;
  std::filesystem::path out_dir = ".";
  RunParams params;
};

/// Applies one `key=value` setting; ConfigError on unknown keys or bad values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

/// Flat `key=value` lines, `#` comments, blank lines ignored.
RunConfig parse_config(std::string_view text);

nlohmann::json params_to_json(const RunParams& p);
RunParams params_from_json(const nlohmann::json& j);

nlohmann::json scheduler_json(const SchedulerSet& pools);

template <class G>
nlohmann::json summary_json(const RunResult<G>& result, const RunParams& params) {
  nlohmann::json trace = nlohmann::json::array();
  for (double hv : result.hv_trace) trace.push_back(rounded(hv));
  nlohmann::json ref = nlohmann::json::array();
  for (double r : result.reference) ref.push_back(rounded(r));
  return {
      {"seed", params.seed},
      {"params", params_to_json(params)},
      {"evaluations", result.evaluations},
      {"archive_size", result.archive.size()},
      {"reference_point", ref},
      {"final_hypervolume", rounded(result.hv_trace.empty() ? 0.0 : result.hv_trace.back())},
      {"hypervolume_trace", trace},
      {"outer_iterations", result.outer_iterations},
      {"inner_iterations", result.inner_iterations},
      {"immigrations", result.immigrations},
      {"schedulers", scheduler_json(result.schedulers)},
      {"wall_clock_seconds", result.wall_clock_seconds},
  };
}

}  // namespace mema
