#include "mema/engine.hpp"

namespace mema {

void RunParams::validate() const {
  auto positive = [](std::size_t v, const char* name) {
    if (v == 0) throw ConfigError(std::string(name) + " must be positive");
  };
  positive(population_size, "population");
  positive(offspring_count, "offspring");
  positive(archive_capacity, "archive_capacity");
  positive(stagnation_window, "stagnation_window");
  positive(scheduler_window, "scheduler_window");
  if (offspring_count > population_size) {
    throw ConfigError("offspring must not exceed population");
  }
  if (!(stagnation_tolerance >= 0.0) || !std::isfinite(stagnation_tolerance)) {
    throw ConfigError("stagnation_tolerance must be a finite non-negative number");
  }
  if (!(immigrant_fraction >= 0.0 && immigrant_fraction <= 1.0)) {
    throw ConfigError("immigrant_fraction must lie in [0, 1]");
  }
  if (!(mutation_probability >= 0.0 && mutation_probability <= 1.0)) {
    throw ConfigError("mutation_probability must lie in [0, 1]");
  }
  // 1/2 is the largest floor a two-operator pool accepts.
  if (!(probability_floor >= 0.0 && probability_floor <= 0.5)) {
    throw ConfigError("probability_floor must lie in [0, 0.5]");
  }
}

SchedulerSet::SchedulerSet(std::size_t window, double floor)
    : selection(PoolKind::Selection, {"binary_tournament", "uniform"}, window, floor),
      variation(PoolKind::Variation, {"mutate_reattach", "crossover_parentmix"}, window, floor),
      local_search(PoolKind::LocalSearch, {"chebyshev_descent", "pareto_step"}, window, floor),
      replacement(PoolKind::Replacement, {"elitist", "generational_elite"}, window, floor),
      reduction(PoolKind::Reduction, {"crowding", "nearest_neighbor"}, window, floor),
      immigration(PoolKind::Immigration, {"fresh_random", "archive_mutation"}, window, floor) {}

bool stagnation(std::span<const double> trace, std::size_t window, double tolerance) {
  if (window == 0 || trace.size() < window + 1) return false;
  for (std::size_t i = trace.size() - window; i < trace.size(); ++i) {
    if (!(trace[i] - trace[i - 1] < tolerance)) return false;
  }
  return true;
}

std::size_t immigrant_count(double fraction, std::size_t population) {
  if (population == 0 || fraction <= 0.0) return 0;
  // Guard against 0.3 * 10 landing a hair above 3.
  const double raw = fraction * static_cast<double>(population);
  auto count = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::min(count, population - 1);
}

}  // namespace mema
