#pragma once

// Nondominated sorting and density estimates used by archive truncation,
// tournament selection, survival selection and immigration.
//
// Every function takes a `tie` span: tie[i] is the canonical position of
// point i (smaller = canonically earlier). All ties are broken with it, so
// results never depend on input order beyond what `tie` encodes.

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "mema/core.hpp"

namespace mema {

enum class Density { Crowding, NearestNeighbor };

/// Pareto rank of each point: 0 for the nondominated layer, 1 for the layer
/// nondominated once layer 0 is removed, and so on.
std::vector<std::size_t> pareto_ranks(std::span<const ObjectiveVector> points);

/// Density of each point of `subset` relative to the other members of
/// `subset`; larger means more isolated. Per objective, the canonically first
/// point holding the minimum and the canonically first point holding the
/// maximum are boundary points and get +infinity. Result is indexed like `subset`.
std::vector<double> density(std::span<const ObjectiveVector> points,
                            std::span<const std::size_t> subset,
                            std::span<const std::size_t> tie, Density measure);

/// Removes members of `subset` one at a time, always the lowest-density one
/// (recomputed after each removal; among equal densities the canonically
/// last), until `target` remain. Returns survivors in ascending index order.
std::vector<std::size_t> truncate(std::span<const ObjectiveVector> points,
                                  std::vector<std::size_t> subset, std::size_t target,
                                  std::span<const std::size_t> tie, Density measure);

/// Picks `count` points: whole Pareto layers in rank order, the last partial
/// layer truncated by crowding. Returns indices in ascending order.
std::vector<std::size_t> elitist_select(std::span<const ObjectiveVector> points,
                                        std::size_t count, std::span<const std::size_t> tie);

/// Rank and crowding of every point, crowding computed within its own layer.
struct RankInfo {
  std::vector<std::size_t> rank;
  std::vector<double> crowding;
};

RankInfo rank_and_crowding(std::span<const ObjectiveVector> points,
                           std::span<const std::size_t> tie);

/// Indices sorted best first: rank ascending, crowding descending, then tie.
std::vector<std::size_t> elitist_order(const RankInfo& info, std::span<const std::size_t> tie);

/// Canonical positions of candidates (see `canonical_less`).
template <class G>
std::vector<std::size_t> canonical_positions(std::span<const Candidate<G>> cs) {
  std::vector<std::size_t> order(cs.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (canonical_less(cs[a], cs[b])) return true;
    if (canonical_less(cs[b], cs[a])) return false;
    return a < b;
  });
  std::vector<std::size_t> tie(cs.size());
  for (std::size_t pos = 0; pos < order.size(); ++pos) tie[order[pos]] = pos;
  return tie;
}

template <class G>
std::vector<ObjectiveVector> objectives_of(std::span<const Candidate<G>> cs) {
  std::vector<ObjectiveVector> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(c.objectives);
  return out;
}

}  // namespace mema
