// mema: command-line front end.
//
//   mema run     --instance net.txt [--config run.cfg] [--seed N] [--budget N] [--out DIR]
//   mema oracle  --instance net.txt --out front.csv
//   mema measure a.csv b.csv [--ref 10,2]

#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mema/cli.hpp"

namespace {

std::optional<mema::ObjectiveVector> parse_ref(const std::string& text) {
  std::vector<double> v;
  std::stringstream in(text);
  for (std::string item; std::getline(in, item, ',');) {
    std::size_t used = 0;
    v.push_back(std::stod(item, &used));
    if (used != item.size()) throw std::invalid_argument(item);
  }
  return mema::ObjectiveVector(std::move(v));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Multi-objective memetic route optimizer for nested mobile networks"};
  app.require_subcommand(1);

  std::string config_path, instance, out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> budget;
  auto* run = app.add_subcommand("run", "optimize an instance, write front.csv and summary.json");
  run->add_option("--config", config_path, "key=value configuration file");
  run->add_option("--instance", instance, "instance file (overrides config)");
  run->add_option("--seed", seed, "random seed (overrides config)");
  run->add_option("--budget", budget, "evaluation budget (overrides config)");
  run->add_option("--out", out, "output directory (overrides config)");

  std::string oracle_instance, oracle_out;
  auto* oracle = app.add_subcommand("oracle", "exact front by exhaustive enumeration");
  oracle->add_option("--instance", oracle_instance, "instance file")->required();
  oracle->add_option("--out", oracle_out, "output CSV")->required();

  std::string front_a, front_b, ref_text;
  auto* measure = app.add_subcommand("measure", "compare two fronts");
  measure->add_option("front_a", front_a, "first front CSV")->required();
  measure->add_option("front_b", front_b, "second front CSV")->required();
  measure->add_option("--ref", ref_text, "reference point, comma separated");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : mema::cli::kConfigError;
  }

  if (*run) {
    mema::RunConfig config;
    try {
      if (!config_path.empty()) config = mema::parse_config(mema::read_file(config_path));
      if (!instance.empty()) config.instance = instance;
      if (seed) config.params.seed = *seed;
      if (budget) config.params.budget = *budget;
      if (!out.empty()) config.out_dir = out;
    } catch (const mema::Error& e) {
      std::cerr << "config error: " << e.what() << "\n";
      return mema::cli::kConfigError;
    }
    return mema::cli::cmd_run(config, std::cerr);
  }
  if (*oracle) return mema::cli::cmd_oracle(oracle_instance, oracle_out, std::cerr);

  std::optional<mema::ObjectiveVector> ref;
  if (!ref_text.empty()) {
    try {
      ref = parse_ref(ref_text);
    } catch (const std::exception&) {
      std::cerr << "config error: bad --ref '" << ref_text << "'\n";
      return mema::cli::kConfigError;
    }
  }
  return mema::cli::cmd_measure(front_a, front_b, ref, std::cout, std::cerr);
}
