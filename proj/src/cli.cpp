#include "mema/cli.hpp"

#include "mema/measures.hpp"
#include "mema/netmodel.hpp"

namespace mema::cli {

namespace {

std::vector<FrontRow> archive_rows(const NondominatedArchive<net::RouteAssignment>& archive) {
  std::vector<FrontRow> rows;
  for (const auto& m : archive.members()) rows.push_back({m.objectives, m.key});
  return rows;
}

}  // namespace

int cmd_run(const RunConfig& config, std::ostream& err) {
  try {
    config.params.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  if (config.instance.empty()) {
    err << "config error: no instance given\n";
    return kConfigError;
  }

  std::optional<net::NetworkProblem> problem;
  try {
    problem.emplace(net::load_instance(config.instance));
  } catch (const InstanceError& e) {
    err << "instance error: " << e.what() << "\n";
    return kInstanceError;
  }

  try {
    std::filesystem::create_directories(config.out_dir);
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: cannot create output directory: " << e.what() << "\n";
    return kConfigError;
  }

  try {
    const auto result = run(*problem, config.params);
    write_file(config.out_dir / "front.csv", front_csv(archive_rows(result.archive)));
    write_file(config.out_dir / "summary.json",
               summary_json(result, config.params).dump(2) + "\n");
  } catch (const InstanceError& e) {
    err << "instance error: " << e.what() << "\n";
    return kInstanceError;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return kFailure;
  }
  return kOk;
}

int cmd_oracle(const std::filesystem::path& instance, const std::filesystem::path& out,
               std::ostream& err) {
  std::optional<net::NetworkInstance> inst;
  try {
    inst.emplace(net::load_instance(instance));
  } catch (const InstanceError& e) {
    err << "instance error: " << e.what() << "\n";
    return kInstanceError;
  }
  try {
    std::vector<FrontRow> rows;
    for (const auto& p : net::brute_force_pareto(*inst)) {
      rows.push_back({p.objectives, net::to_string(*inst, p.witness)});
    }
    if (out.has_parent_path()) std::filesystem::create_directories(out.parent_path());
    write_file(out, front_csv(std::move(rows)));
  } catch (const OracleScopeError& e) {
    err << "oracle error: " << e.what() << "\n";
    return kOracleScope;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return kOk;
}

int cmd_measure(const std::filesystem::path& front_a, const std::filesystem::path& front_b,
                const std::optional<ObjectiveVector>& ref, std::ostream& out, std::ostream& err) {
  std::vector<ObjectiveVector> a, b;
  try {
    a = parse_front_csv(read_file(front_a));
    b = parse_front_csv(read_file(front_b));
  } catch (const Error& e) {
    err << "format error: " << e.what() << "\n";
    return kConfigError;
  }
  if (!a.empty() && !b.empty() && a.front().size() != b.front().size()) {
    err << "format error: fronts have different objective counts\n";
    return kConfigError;
  }

  std::optional<ObjectiveVector> reference = ref;
  if (!reference) {
    std::vector<ObjectiveVector> all = a;
    all.insert(all.end(), b.begin(), b.end());
    if (!all.empty()) reference = reference_point(all);
  }

  nlohmann::json j;
  try {
    j["hv_a"] = reference ? rounded(hypervolume(a, *reference)) : 0.0;
    j["hv_b"] = reference ? rounded(hypervolume(b, *reference)) : 0.0;
  } catch (const ContractViolation& e) {
    err << "reference error: " << e.what() << "\n";
    return kConfigError;
  }
  j["epsilon_ab"] = a.empty() || b.empty() ? nlohmann::json(nullptr)
                                           : nlohmann::json(rounded(additive_epsilon(a, b)));
  j["coverage_ab"] = a.empty() || b.empty() ? nlohmann::json(nullptr)
                                            : nlohmann::json(rounded(coverage(a, b)));
  j["coverage_ba"] = a.empty() || b.empty() ? nlohmann::json(nullptr)
                                            : nlohmann::json(rounded(coverage(b, a)));
  if (reference) {
    nlohmann::json r = nlohmann::json::array();
    for (double v : *reference) r.push_back(rounded(v));
    j["reference_point"] = std::move(r);
  } else {
    j["reference_point"] = nullptr;
  }
  out << j.dump(2) << "\n";
  return kOk;
}

}  // namespace mema::cli
