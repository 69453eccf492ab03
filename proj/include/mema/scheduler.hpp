#pragma once

// Success-driven operator scheduling: probability matching over a sliding
// window of per-operator outcomes, with a probability floor.

#include <cstddef>
#include <deque>
#include <string>
#include <vector>

#include "mema/core.hpp"

namespace mema {

enum class PoolKind { Selection, Variation, LocalSearch, Replacement, Reduction, Immigration };

/// Short pool name used in reports: SEL, VAR, LS, REP, RED, IMM.
const char* to_string(PoolKind kind);

struct OperatorStats {
  std::string name;
  std::size_t trials = 0;     // lifetime, not windowed
  std::size_t successes = 0;  // lifetime, not windowed
};

class OperatorPool {
 public:
  static constexpr std::size_t kDefaultWindow = 50;
  static constexpr double kDefaultFloor = 0.05;

  /// Throws ConfigError on an empty operator list, a zero window, or a
  /// floor outside [0, 1/|operators|].
  OperatorPool(PoolKind kind, std::vector<std::string> operators,
               std::size_t window = kDefaultWindow, double floor = kDefaultFloor);

  [[nodiscard]] PoolKind kind() const { return kind_; }
  [[nodiscard]] std::size_t size() const { return stats_.size(); }
  [[nodiscard]] std::size_t window() const { return window_; }
  [[nodiscard]] double floor() const { return floor_; }
  [[nodiscard]] const std::vector<OperatorStats>& stats() const { return stats_; }
  [[nodiscard]] const std::deque<bool>& outcomes(std::size_t op) const { return windows_.at(op); }

  /// Laplace-smoothed windowed success rate (s + 1) / (t + 2).
  [[nodiscard]] double success_estimate(std::size_t op) const;

  /// p_i = floor + (1 - n * floor) * s_i / sum_j s_j
  [[nodiscard]] std::vector<double> probabilities() const;

  /// Cumulative sampling with one uniform draw.
  std::size_t choose(Rng& rng) const { return choose(rng.uniform()); }
  /// Operator selected by the draw `u` in [0, 1).
  [[nodiscard]] std::size_t choose(double u) const;

  /// Pushes an outcome into the operator's window, evicting the oldest past W.
  void report(std::size_t op, bool success);

 private:
  PoolKind kind_;
  std::size_t window_;
  double floor_;
  std::vector<OperatorStats> stats_;
  std::vector<std::deque<bool>> windows_;
};

/// Value-returning form of `OperatorPool::report`.
inline OperatorPool report(OperatorPool pool, std::size_t op, bool success) {
  pool.report(op, success);
  return pool;
}

}  // namespace mema
