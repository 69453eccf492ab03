#include "mema/ranking.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace mema {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Positions (into `subset`) sorted by objective m, then canonical tie.
std::vector<std::size_t> sorted_by_objective(std::span<const ObjectiveVector> points,
                                             std::span<const std::size_t> subset,
                                             std::span<const std::size_t> tie, std::size_t m) {
  std::vector<std::size_t> pos(subset.size());
  std::iota(pos.begin(), pos.end(), std::size_t{0});
  std::sort(pos.begin(), pos.end(), [&](std::size_t a, std::size_t b) {
    const double va = points[subset[a]][m];
    const double vb = points[subset[b]][m];
    if (va != vb) return va < vb;
    return tie[subset[a]] < tie[subset[b]];
  });
  return pos;
}

// Marks the canonically first holder of the minimum and of the maximum.
void mark_boundaries(std::span<const ObjectiveVector> points, std::span<const std::size_t> subset,
                     const std::vector<std::size_t>& sorted, std::size_t m,
                     std::vector<double>& out) {
  out[sorted.front()] = kInf;
  const double vmax = points[subset[sorted.back()]][m];
  for (std::size_t k : sorted) {
    if (points[subset[k]][m] == vmax) {
      out[k] = kInf;
      break;
    }
  }
}

std::vector<double> crowding(std::span<const ObjectiveVector> points,
                             std::span<const std::size_t> subset,
                             std::span<const std::size_t> tie) {
  const std::size_t n = subset.size();
  std::vector<double> out(n, 0.0);
  if (n == 0) return out;
  const std::size_t dims = points[subset[0]].size();
  for (std::size_t m = 0; m < dims; ++m) {
    const auto sorted = sorted_by_objective(points, subset, tie, m);
    const double lo = points[subset[sorted.front()]][m];
    const double hi = points[subset[sorted.back()]][m];
    if (hi > lo) {
      for (std::size_t j = 0; j < n; ++j) {
        const std::size_t prev = sorted[j == 0 ? 0 : j - 1];
        const std::size_t next = sorted[j + 1 < n ? j + 1 : n - 1];
        out[sorted[j]] += (points[subset[next]][m] - points[subset[prev]][m]) / (hi - lo);
      }
    }
    mark_boundaries(points, subset, sorted, m, out);
  }
  return out;
}

std::vector<double> nearest_neighbor(std::span<const ObjectiveVector> points,
                                     std::span<const std::size_t> subset,
                                     std::span<const std::size_t> tie) {
  const std::size_t n = subset.size();
  std::vector<double> out(n, kInf);
  if (n == 0) return out;
  const std::size_t dims = points[subset[0]].size();
  std::vector<double> scale(dims, 1.0);
  for (std::size_t m = 0; m < dims; ++m) {
    double lo = kInf, hi = -kInf;
    for (std::size_t i : subset) {
      lo = std::min(lo, points[i][m]);
      hi = std::max(hi, points[i][m]);
    }
    if (hi > lo) scale[m] = hi - lo;
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = 0; b < n; ++b) {
      if (a == b) continue;
      double d2 = 0.0;
      for (std::size_t m = 0; m < dims; ++m) {
        const double d = (points[subset[a]][m] - points[subset[b]][m]) / scale[m];
        d2 += d * d;
      }
      out[a] = std::min(out[a], std::sqrt(d2));
    }
  }
  for (std::size_t m = 0; m < dims; ++m) {
    mark_boundaries(points, subset, sorted_by_objective(points, subset, tie, m), m, out);
  }
  return out;
}

}  // namespace

std::vector<std::size_t> pareto_ranks(std::span<const ObjectiveVector> points) {
  const std::size_t n = points.size();
  std::vector<std::size_t> dominated_by_count(n, 0);
  std::vector<std::vector<std::size_t>> dominated(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      switch (dominates(points[i], points[j])) {
        case Dominance::Dominates:
          dominated[i].push_back(j);
          ++dominated_by_count[j];
          break;
        case Dominance::DominatedBy:
          dominated[j].push_back(i);
          ++dominated_by_count[i];
          break;
        default: break;
      }
    }
  }
  std::vector<std::size_t> rank(n, 0);
  std::vector<std::size_t> layer;
  for (std::size_t i = 0; i < n; ++i) {
    if (dominated_by_count[i] == 0) layer.push_back(i);
  }
  std::size_t r = 0;
  while (!layer.empty()) {
    std::vector<std::size_t> next;
    for (std::size_t i : layer) {
      rank[i] = r;
      for (std::size_t j : dominated[i]) {
        if (--dominated_by_count[j] == 0) next.push_back(j);
      }
    }
    layer = std::move(next);
    ++r;
  }
  return rank;
}

std::vector<double> density(std::span<const ObjectiveVector> points,
                            std::span<const std::size_t> subset,
                            std::span<const std::size_t> tie, Density measure) {
  return measure == Density::Crowding ? crowding(points, subset, tie)
                                      : nearest_neighbor(points, subset, tie);
}

std::vector<std::size_t> truncate(std::span<const ObjectiveVector> points,
                                  std::vector<std::size_t> subset, std::size_t target,
                                  std::span<const std::size_t> tie, Density measure) {
  while (subset.size() > target) {
    const auto d = density(points, subset, tie, measure);
    std::size_t worst = 0;
    for (std::size_t k = 1; k < subset.size(); ++k) {
      if (d[k] < d[worst] || (d[k] == d[worst] && tie[subset[k]] > tie[subset[worst]])) worst = k;
    }
    subset.erase(subset.begin() + static_cast<std::ptrdiff_t>(worst));
  }
  std::sort(subset.begin(), subset.end());
  return subset;
}

std::vector<std::size_t> elitist_select(std::span<const ObjectiveVector> points,
                                        std::size_t count, std::span<const std::size_t> tie) {
  const auto rank = pareto_ranks(points);
  std::map<std::size_t, std::vector<std::size_t>> layers;
  for (std::size_t i = 0; i < points.size(); ++i) layers[rank[i]].push_back(i);

  std::vector<std::size_t> kept;
  for (auto& [r, layer] : layers) {
    if (kept.size() >= count) break;
    const std::size_t room = count - kept.size();
    if (layer.size() > room) layer = truncate(points, layer, room, tie, Density::Crowding);
    kept.insert(kept.end(), layer.begin(), layer.end());
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

RankInfo rank_and_crowding(std::span<const ObjectiveVector> points,
                           std::span<const std::size_t> tie) {
  RankInfo info{pareto_ranks(points), std::vector<double>(points.size(), 0.0)};
  std::map<std::size_t, std::vector<std::size_t>> layers;
  for (std::size_t i = 0; i < points.size(); ++i) layers[info.rank[i]].push_back(i);
  for (const auto& [r, layer] : layers) {
    const auto d = crowding(points, layer, tie);
    for (std::size_t k = 0; k < layer.size(); ++k) info.crowding[layer[k]] = d[k];
  }
  return info;
}

std::vector<std::size_t> elitist_order(const RankInfo& info, std::span<const std::size_t> tie) {
  std::vector<std::size_t> order(info.rank.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (info.rank[a] != info.rank[b]) return info.rank[a] < info.rank[b];
    if (info.crowding[a] != info.crowding[b]) return info.crowding[a] > info.crowding[b];
    return tie[a] < tie[b];
  });
  return order;
}

}  // namespace mema
