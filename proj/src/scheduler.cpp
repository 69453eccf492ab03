#include "mema/scheduler.hpp"

#include <algorithm>
#include <numeric>

namespace mema {

const char* to_string(PoolKind kind) {
  switch (kind) {
    case PoolKind::Selection: return "SEL";
    case PoolKind::Variation: return "VAR";
    case PoolKind::LocalSearch: return "LS";
    case PoolKind::Replacement: return "REP";
    case PoolKind::Reduction: return "RED";
    case PoolKind::Immigration: return "IMM";
  }
  return "?";
}

OperatorPool::OperatorPool(PoolKind kind, std::vector<std::string> operators, std::size_t window,
                           double floor)
    : kind_(kind), window_(window), floor_(floor) {
  if (operators.empty()) throw ConfigError(std::string(to_string(kind)) + " pool has no operators");
  if (window_ == 0) throw ConfigError("scheduler window must be positive");
  const double n = static_cast<double>(operators.size());
  if (!(floor_ >= 0.0) || floor_ * n > 1.0) {
    throw ConfigError("scheduler probability floor must lie in [0, 1/|operators|]");
  }
  for (auto& name : operators) stats_.push_back({std::move(name), 0, 0});
  windows_.resize(stats_.size());
}

double OperatorPool::success_estimate(std::size_t op) const {
  const auto& w = windows_.at(op);
  const auto s = static_cast<double>(std::count(w.begin(), w.end(), true));
  return (s + 1.0) / (static_cast<double>(w.size()) + 2.0);
}

std::vector<double> OperatorPool::probabilities() const {
  const std::size_t n = stats_.size();
  std::vector<double> est(n);
  for (std::size_t i = 0; i < n; ++i) est[i] = success_estimate(i);
  const double total = std::accumulate(est.begin(), est.end(), 0.0);
  const double share = 1.0 - static_cast<double>(n) * floor_;
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = floor_ + share * est[i] / total;
  return p;
}

std::size_t OperatorPool::choose(double u) const {
  const auto p = probabilities();
  double cumulative = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    cumulative += p[i];
    if (u < cumulative) return i;
  }
  return p.size() - 1;  // u within rounding of 1
}

void OperatorPool::report(std::size_t op, bool success) {
  if (op >= stats_.size()) {
    throw ContractViolation("operator " + std::to_string(op) + " not in " + to_string(kind_) +
                            " pool");
  }
  auto& w = windows_[op];
  w.push_back(success);
  if (w.size() > window_) w.pop_front();
  ++stats_[op].trials;
  if (success) ++stats_[op].successes;
}

}  // namespace mema
