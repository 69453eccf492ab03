#include "mema/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

namespace mema {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t end = s.find(sep, start);
    out.push_back(s.substr(start, end == std::string_view::npos ? end : end - start));
    if (end == std::string_view::npos) return out;
    start = end + 1;
  }
}

template <class T>
bool parse_exact(std::string_view s, T& out) {
  s = trim(s);
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc{} && ptr == s.data() + s.size() && !s.empty();
}

template <class T>
T setting(std::string_view key, std::string_view value) {
  T v{};
  if (!parse_exact(value, v)) {
    throw ConfigError("invalid value '" + std::string(value) + "' for " + std::string(key));
  }
  return v;
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

double rounded(double v) { return std::strtod(format_number(v).c_str(), nullptr); }

std::string front_csv(std::vector<FrontRow> rows) {
  std::sort(rows.begin(), rows.end(), [](const FrontRow& a, const FrontRow& b) {
    if (auto c = a.objectives <=> b.objectives; c != 0) return c < 0;
    return a.genotype < b.genotype;
  });
  const std::size_t n = rows.empty() ? 2 : rows.front().objectives.size();
  std::string out;
  for (std::size_t i = 0; i < n; ++i) out += "z" + std::to_string(i + 1) + ",";
  out += "genotype\n";
  for (const auto& r : rows) {
    for (double v : r.objectives) out += format_number(v) + ",";
    out += r.genotype + "\n";
  }
  return out;
}

std::vector<ObjectiveVector> parse_front_csv(std::string_view text) {
  std::vector<ObjectiveVector> out;
  std::size_t objectives = 0;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    line = trim(line);
    if (line.empty()) continue;
    const auto fields = split(line, ',');
    if (objectives == 0) {
      for (const auto& f : fields) {
        if (trim(f) == "z" + std::to_string(objectives + 1)) ++objectives;
        else break;
      }
      if (objectives == 0) throw FormatError("front CSV lacks a z1,z2,... header");
      continue;
    }
    if (fields.size() < objectives) {
      throw FormatError("front CSV line " + std::to_string(line_no) + " has too few fields");
    }
    std::vector<double> z(objectives);
    for (std::size_t i = 0; i < objectives; ++i) {
      if (!parse_exact(fields[i], z[i]) || !std::isfinite(z[i])) {
        throw FormatError("front CSV line " + std::to_string(line_no) + ": bad number '" +
                          std::string(fields[i]) + "'");
      }
    }
    out.emplace_back(std::move(z));
  }
  if (objectives == 0) throw FormatError("front CSV is empty (no header)");
  return out;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw ConfigError("failed writing '" + path.string() + "'");
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  RunParams& p = config.params;
  value = trim(value);
  if (key == "instance") config.instance = std::string(value);
  else if (key == "out") config.out_dir = std::string(value);
  else if (key == "seed") p.seed = setting<std::uint64_t>(key, value);
  else if (key == "budget") p.budget = setting<std::size_t>(key, value);
  else if (key == "population") p.population_size = setting<std::size_t>(key, value);
  else if (key == "offspring") p.offspring_count = setting<std::size_t>(key, value);
  else if (key == "archive_capacity") p.archive_capacity = setting<std::size_t>(key, value);
  else if (key == "stagnation_window") p.stagnation_window = setting<std::size_t>(key, value);
  else if (key == "stagnation_tolerance") p.stagnation_tolerance = setting<double>(key, value);
  else if (key == "immigrant_fraction") p.immigrant_fraction = setting<double>(key, value);
  else if (key == "scheduler_window") p.scheduler_window = setting<std::size_t>(key, value);
  else if (key == "probability_floor") p.probability_floor = setting<double>(key, value);
  else if (key == "ls_moves") p.ls_moves = setting<std::size_t>(key, value);
  else if (key == "mutation_probability") p.mutation_probability = setting<double>(key, value);
  else throw ConfigError("unknown configuration key '" + std::string(key) + "'");
}

RunConfig parse_config(std::string_view text) {
  RunConfig config;
  std::size_t line_no = 0;
  for (std::string_view line : split(text, '\n')) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("config line " + std::to_string(line_no) + ": expected key=value");
    }
    apply_setting(config, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return config;
}

nlohmann::json params_to_json(const RunParams& p) {
  return {
      {"population", p.population_size},
      {"offspring", p.offspring_count},
      {"archive_capacity", p.archive_capacity},
      {"budget", p.budget},
      {"stagnation_window", p.stagnation_window},
      {"stagnation_tolerance", rounded(p.stagnation_tolerance)},
      {"immigrant_fraction", rounded(p.immigrant_fraction)},
      {"seed", p.seed},
      {"scheduler_window", p.scheduler_window},
      {"probability_floor", rounded(p.probability_floor)},
      {"ls_moves", p.ls_moves},
      {"mutation_probability", rounded(p.mutation_probability)},
  };
}

RunParams params_from_json(const nlohmann::json& j) {
  try {
    RunParams p;
    p.population_size = j.at("population").get<std::size_t>();
    p.offspring_count = j.at("offspring").get<std::size_t>();
    p.archive_capacity = j.at("archive_capacity").get<std::size_t>();
    p.budget = j.at("budget").get<std::size_t>();
    p.stagnation_window = j.at("stagnation_window").get<std::size_t>();
    p.stagnation_tolerance = j.at("stagnation_tolerance").get<double>();
    p.immigrant_fraction = j.at("immigrant_fraction").get<double>();
    p.seed = j.at("seed").get<std::uint64_t>();
    p.scheduler_window = j.at("scheduler_window").get<std::size_t>();
    p.probability_floor = j.at("probability_floor").get<double>();
    p.ls_moves = j.at("ls_moves").get<std::size_t>();
    p.mutation_probability = j.at("mutation_probability").get<double>();
    return p;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad run parameters: ") + e.what());
  }
}

nlohmann::json scheduler_json(const SchedulerSet& pools) {
  nlohmann::json out = nlohmann::json::object();
  for (const OperatorPool* pool : pools.all()) {
    const auto p = pool->probabilities();
    nlohmann::json ops = nlohmann::json::array();
    for (std::size_t i = 0; i < pool->size(); ++i) {
      const auto& s = pool->stats()[i];
      ops.push_back({{"name", s.name},
                     {"probability", rounded(p[i])},
                     {"trials", s.trials},
                     {"successes", s.successes}});
    }
    out[to_string(pool->kind())] = std::move(ops);
  }
  return out;
}

}  // namespace mema
