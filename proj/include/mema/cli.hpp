#pragma once

// Batch commands behind the `mema` executable. Each returns the process exit
// code and writes diagnostics to `err`.

#include <filesystem>
#include <optional>
#include <ostream>

#include "mema/report.hpp"

namespace mema::cli {

enum ExitCode : int {
  kOk = 0,
  kFailure = 1,
  kConfigError = 2,
  kInstanceError = 3,
  kOracleScope = 4,
};

/// Runs the engine on `config.instance`; writes front.csv and summary.json
/// into `config.out_dir`.
int cmd_run(const RunConfig& config, std::ostream& err);

/// Writes the exact front of the instance to `out` in the front CSV schema.
int cmd_oracle(const std::filesystem::path& instance, const std::filesystem::path& out,
               std::ostream& err);

/// Prints HV of both fronts, additive epsilon of a against b and coverage in
/// both directions as JSON. Without `ref`, the reference point is derived
/// from the union of both fronts.
int cmd_measure(const std::filesystem::path& front_a, const std::filesystem::path& front_b,
                const std::optional<ObjectiveVector>& ref, std::ostream& out, std::ostream& err);

}  // namespace mema::cli
