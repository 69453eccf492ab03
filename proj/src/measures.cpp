#include "mema/measures.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace mema {

namespace {

using Point2 = std::array<double, 2>;

double sweep_2d(std::vector<Point2> pts, double ref_x, double ref_y) {
  std::sort(pts.begin(), pts.end());
  double area = 0.0;
  double lowest_y = ref_y;
  for (const auto& [x, y] : pts) {
    if (y < lowest_y) {
      area += (ref_x - x) * (lowest_y - y);
      lowest_y = y;
    }
  }
  return area;
}

double slice_3d(std::span<const ObjectiveVector> front, const ObjectiveVector& ref) {
  std::vector<const ObjectiveVector*> by_z;
  for (const auto& p : front) by_z.push_back(&p);
  std::sort(by_z.begin(), by_z.end(),
            [](const ObjectiveVector* a, const ObjectiveVector* b) { return (*a)[2] < (*b)[2]; });
  // Consecutive slabs with the same cross-section are merged, so a point that
  // adds nothing leaves the result bit-identical.
  double volume = 0.0;
  double area = 0.0;
  double slab_start = 0.0;
  std::vector<Point2> section;
  for (std::size_t k = 0; k < by_z.size(); ++k) {
    const double z = (*by_z[k])[2];
    section.push_back({(*by_z[k])[0], (*by_z[k])[1]});
    if (k + 1 < by_z.size() && (*by_z[k + 1])[2] == z) continue;
    const double next_area = sweep_2d(section, ref[0], ref[1]);
    if (next_area != area) {
      volume += area * (z - slab_start);
      area = next_area;
      slab_start = z;
    }
  }
  return volume + area * (ref[2] - slab_start);
}

}  // namespace

bool strictly_inside(const ObjectiveVector& z, const ObjectiveVector& ref) {
  if (z.size() != ref.size()) throw ContractViolation("reference point length mismatch");
  for (std::size_t i = 0; i < z.size(); ++i) {
    if (!(z[i] < ref[i])) return false;
  }
  return true;
}

double hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& ref) {
  if (ref.size() != 2 && ref.size() != 3) {
    throw ContractViolation("exact hypervolume supports 2 or 3 objectives, got " +
                            std::to_string(ref.size()));
  }
  for (const auto& p : front) {
    if (!strictly_inside(p, ref)) {
      throw ContractViolation("reference point is not strictly dominated by every front member");
    }
  }
  if (front.empty()) return 0.0;
  if (ref.size() == 3) return slice_3d(front, ref);
  std::vector<Point2> pts;
  pts.reserve(front.size());
  for (const auto& p : front) pts.push_back({p[0], p[1]});
  return sweep_2d(std::move(pts), ref[0], ref[1]);
}

double bounded_hypervolume(std::span<const ObjectiveVector> front, const ObjectiveVector& ref) {
  std::vector<ObjectiveVector> inside;
  for (const auto& p : front) {
    if (strictly_inside(p, ref)) inside.push_back(p);
  }
  return hypervolume(inside, ref);
}

double additive_epsilon(std::span<const ObjectiveVector> approx,
                        std::span<const ObjectiveVector> reference) {
  if (approx.empty()) throw ContractViolation("additive epsilon of an empty approximation");
  double eps = -std::numeric_limits<double>::infinity();
  for (const auto& r : reference) {
    double best = std::numeric_limits<double>::infinity();
    for (const auto& a : approx) {
      if (a.size() != r.size()) throw ContractViolation("additive epsilon over mixed lengths");
      double worst = -std::numeric_limits<double>::infinity();
      for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, a[i] - r[i]);
      best = std::min(best, worst);
    }
    eps = std::max(eps, best);
  }
  return reference.empty() ? 0.0 : eps;
}

double coverage(std::span<const ObjectiveVector> a, std::span<const ObjectiveVector> b) {
  if (a.empty() || b.empty()) throw ContractViolation("coverage needs two non-empty fronts");
  std::size_t covered = 0;
  for (const auto& q : b) {
    if (std::any_of(a.begin(), a.end(), [&](const ObjectiveVector& p) { return weakly_dominates(p, q); })) {
      ++covered;
    }
  }
  return static_cast<double>(covered) / static_cast<double>(b.size());
}

ObjectiveVector reference_point(std::span<const ObjectiveVector> points) {
  if (points.empty()) throw ContractViolation("reference point of an empty set");
  std::vector<double> worst(points.front().values().begin(), points.front().values().end());
  for (const auto& p : points) {
    if (p.size() != worst.size()) throw ContractViolation("reference point over mixed lengths");
    for (std::size_t i = 0; i < worst.size(); ++i) worst[i] = std::max(worst[i], p[i]);
  }
  for (double& w : worst) w = w + 0.1 * std::abs(w) + 1e-9;
  return ObjectiveVector(std::move(worst));
}

}  // namespace mema
