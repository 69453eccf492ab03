#include "mema/core.hpp"

#include <cmath>
#include <limits>

namespace mema {

ObjectiveVector::ObjectiveVector(std::vector<double> values) : values_(std::move(values)) {
  if (values_.empty()) throw ContractViolation("objective vector must have at least one component");
  for (double v : values_) {
    if (!std::isfinite(v)) throw ContractViolation("objective vector component is not finite");
  }
}

std::strong_ordering operator<=>(const ObjectiveVector& a, const ObjectiveVector& b) {
  const std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i] < b[i]) return std::strong_ordering::less;
    if (a[i] > b[i]) return std::strong_ordering::greater;
  }
  return a.size() <=> b.size();
}

const char* to_string(Dominance d) {
  switch (d) {
    case Dominance::Dominates: return "Dominates";
    case Dominance::DominatedBy: return "DominatedBy";
    case Dominance::Incomparable: return "Incomparable";
    case Dominance::Equal: return "Equal";
  }
  return "?";
}

Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  if (a.size() != b.size()) {
    throw ContractViolation("dominance between objective vectors of length " +
                            std::to_string(a.size()) + " and " + std::to_string(b.size()));
  }
  bool a_better = false;
  bool b_better = false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < b[i]) a_better = true;
    else if (b[i] < a[i]) b_better = true;
  }
  if (a_better && b_better) return Dominance::Incomparable;
  if (a_better) return Dominance::Dominates;
  if (b_better) return Dominance::DominatedBy;
  return Dominance::Equal;
}

bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b) {
  const Dominance d = dominates(a, b);
  return d == Dominance::Dominates || d == Dominance::Equal;
}

std::size_t Rng::index(std::size_t n) {
  if (n == 0) throw ContractViolation("Rng::index on an empty range");
  const std::uint64_t bound = n;
  // Rejection keeps the draw exactly uniform.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t x;
  do {
    x = engine_();
  } while (x >= limit);
  return static_cast<std::size_t>(x % bound);
}

}  // namespace mema
