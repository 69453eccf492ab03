#pragma once

// Front quality indicators.

#include <span>
#include <vector>

#include "mema/core.hpp"

namespace mema {

/// Exact hypervolume of the region dominated by `front` and bounded by `ref`,
/// for 2 or 3 objectives (2-D sweep, 3-D slicing). Every member must be
/// strictly better than `ref` in every objective. Dominated members are
/// allowed and contribute nothing.
double hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& ref);

/// Hypervolume of the members of `front` that are strictly better than `ref`;
/// the rest are ignored.
double bounded_hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& ref);

/// True iff every component of `z` is strictly less than the matching one of `ref`.
bool strictly_inside(const ObjectiveVector& z, const ObjectiveVector& ref);

/// max over r in `reference` of min over a in `approx` of max_i (a_i - r_i).
/// Signed: negative when `approx` is strictly better everywhere.
double additive_epsilon(std::span<const ObjectiveVector> approx,
                        std::span<const ObjectiveVector> reference);

/// Fraction of `b` weakly dominated by at least one member of `a`.
double coverage(std::span<const ObjectiveVector> a, std::span<const ObjectiveVector> b);

/// Componentwise worst value w over `points`, pushed out to w + 0.1|w| + 1e-9
/// so every point lies strictly inside.
ObjectiveVector reference_point(std::span<const ObjectiveVector> points);

}  // namespace mema
