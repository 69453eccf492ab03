#pragma once

#include <algorithm>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "mema/core.hpp"
#include "mema/ranking.hpp"

namespace mema {

/// How an over-capacity archive is cut back. Both keep the per-objective
/// extremes whenever capacity allows.
enum class ReductionPolicy {
  Crowding,         ///< NSGA-II crowding distance, lowest removed first
  NearestNeighbor,  ///< normalized distance to the closest other member
};

inline Density density_of(ReductionPolicy p) {
  return p == ReductionPolicy::Crowding ? Density::Crowding : Density::NearestNeighbor;
}

/// Mutually nondominated set of candidates with an optional size bound.
///
/// Members are kept in canonical order (objectives, then key). Two members
/// never share a key; members with equal objectives but different keys are
/// both kept.
template <class G>
class NondominatedArchive {
 public:
  using candidate_type = Candidate<G>;

  /// Unbounded archive.
  NondominatedArchive() = default;

  explicit NondominatedArchive(std::optional<std::size_t> capacity) : capacity_(capacity) {
    if (capacity_ && *capacity_ < 1) throw ConfigError("archive capacity must be at least 1");
  }

  [[nodiscard]] const std::vector<candidate_type>& members() const { return members_; }
  [[nodiscard]] std::size_t size() const { return members_.size(); }
  [[nodiscard]] bool empty() const { return members_.empty(); }
  [[nodiscard]] std::optional<std::size_t> capacity() const { return capacity_; }

  /// Adds `s` unless it is dominated by a member or duplicates a member's key;
  /// members dominated by `s` are dropped. Capacity is not enforced.
  /// Returns whether `s` was accepted.
  bool merge(candidate_type s) {
    if (!members_.empty() && members_.front().objectives.size() != s.objectives.size()) {
      throw ContractViolation("archive insert with mismatched objective count");
    }
    for (const auto& m : members_) {
      if (m.key == s.key) return false;
      if (dominates(m.objectives, s.objectives) == Dominance::Dominates) return false;
    }
    std::erase_if(members_, [&](const candidate_type& m) {
      return dominates(s.objectives, m.objectives) == Dominance::Dominates;
    });
    auto at = std::lower_bound(members_.begin(), members_.end(), s, canonical_less<G>);
    members_.insert(at, std::move(s));
    return true;
  }

  /// `merge` followed by `reduce` when the archive overflows. Acceptance is
  /// decided before reduction.
  bool insert(candidate_type s, ReductionPolicy policy = ReductionPolicy::Crowding) {
    const bool accepted = merge(std::move(s));
    if (accepted) reduce(policy);
    return accepted;
  }

  /// Cuts the archive down to capacity by one-at-a-time density truncation.
  void reduce(ReductionPolicy policy = ReductionPolicy::Crowding) {
    if (!capacity_ || members_.size() <= *capacity_) return;
    const auto points = objectives_of<G>(members_);
    // Members are in canonical order, so position is the tie rank.
    std::vector<std::size_t> all(members_.size());
    std::iota(all.begin(), all.end(), std::size_t{0});
    const auto kept = truncate(points, all, *capacity_, all, density_of(policy));
    std::vector<candidate_type> next;
    next.reserve(kept.size());
    for (std::size_t i : kept) next.push_back(std::move(members_[i]));
    members_ = std::move(next);
  }

  [[nodiscard]] std::vector<ObjectiveVector> objective_vectors() const {
    return objectives_of<G>(members_);
  }

  /// True iff some member dominates `z`.
  [[nodiscard]] bool dominated(const ObjectiveVector& z) const {
    return std::any_of(members_.begin(), members_.end(), [&](const candidate_type& m) {
      return dominates(m.objectives, z) == Dominance::Dominates;
    });
  }

 private:
  std::optional<std::size_t> capacity_;
  std::vector<candidate_type> members_;
};

/// The nondominated subset of `solutions`, key duplicates collapsed to one.
template <class G>
NondominatedArchive<G> nondom(std::span<const Candidate<G>> solutions,
                              std::optional<std::size_t> capacity = std::nullopt) {
  if (!solutions.empty()) {
    const std::size_t n = solutions.front().objectives.size();
    for (const auto& s : solutions) {
      if (s.objectives.size() != n) throw ContractViolation("nondom over mixed objective counts");
    }
  }
  NondominatedArchive<G> archive(capacity);
  for (const auto& s : solutions) archive.merge(s);
  archive.reduce();
  return archive;
}

template <class G>
struct InsertResult {
  NondominatedArchive<G> archive;
  bool accepted;
};

/// Value-returning form of `NondominatedArchive::insert`.
template <class G>
InsertResult<G> insert(NondominatedArchive<G> archive, Candidate<G> s,
                       ReductionPolicy policy = ReductionPolicy::Crowding) {
  const bool accepted = archive.insert(std::move(s), policy);
  return {std::move(archive), accepted};
}

/// Value-returning form of `NondominatedArchive::reduce`.
template <class G>
NondominatedArchive<G> reduce(NondominatedArchive<G> archive,
                              ReductionPolicy policy = ReductionPolicy::Crowding) {
  archive.reduce(policy);
  return archive;
}

}  // namespace mema
