#pragma once

// Nested mobile-network route optimization.
//
// Each mobile router (MR) picks one candidate link to a parent, either an
// access router (AR) or another MR. The chosen links must form a forest
// rooted at ARs with every MR at most `max_depth` links away from its AR.
// Every AR is served by one base station (BS).
//
// Objectives, both minimized:
//   z1  sum over MRs of the cost of the links on the MR's path to its AR
//       (a link shared by nested MRs is paid once per MR routed through it)
//   z2  sum over MRs of 1 - prod(1 - p) over the links on the path and the
//       BS of the terminating AR: the expected number of MRs losing service
//       when components fail independently.

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "mema/core.hpp"

namespace mema::net {

/// Syntax error in an instance file; `line` is 1-based.
struct ParseError : InstanceError {
  ParseError(std::size_t line, const std::string& what)
      : InstanceError("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

struct BaseStation {
  std::string id;
  double failure_probability = 0.0;
};

struct AccessRouter {
  std::string id;
  std::size_t base_station = 0;
};

struct NodeRef {
  enum class Kind { AccessRouter, MobileRouter };
  Kind kind = Kind::AccessRouter;
  std::size_t index = 0;

  [[nodiscard]] bool is_access_router() const { return kind == Kind::AccessRouter; }
  friend bool operator==(const NodeRef&, const NodeRef&) = default;
};

struct Link {
  std::size_t child = 0;  // MR index
  NodeRef parent;
  double cost = 0.0;
  double failure_probability = 0.0;
};

/// Parsed network. Base stations, access routers and mobile routers are
/// sorted by id; links are sorted by (child, parent id) and `candidates[m]`
/// lists the indices of MR m's links in that order.
struct NetworkInstance {
  static constexpr std::size_t kDefaultMaxDepth = 4;

  std::vector<BaseStation> base_stations;
  std::vector<AccessRouter> access_routers;
  std::vector<std::string> mobile_routers;
  std::vector<Link> links;
  std::vector<std::vector<std::size_t>> candidates;
  std::size_t max_depth = kDefaultMaxDepth;

  [[nodiscard]] const std::string& node_id(NodeRef n) const {
    return n.is_access_router() ? access_routers[n.index].id : mobile_routers[n.index];
  }
};

/// The genotype: `link[m]` is the index into `NetworkInstance::links` chosen by MR m.
struct RouteAssignment {
  std::vector<std::size_t> link;

  friend bool operator==(const RouteAssignment&, const RouteAssignment&) = default;
  friend auto operator<=>(const RouteAssignment&, const RouteAssignment&) = default;
};

/// Parses the line-based instance format:
///
///     BS  <id> <fail_prob>
///     AR  <id> <bs_id>
///     MR  <id>
///     LINK <child_id> <parent_id> <cost> <fail_prob>
///     MAXDEPTH <k>
///
/// `#` starts a comment. Records may come in any order. Throws ParseError for
/// syntax problems and InstanceError for semantic ones (unknown or duplicate
/// ids, probabilities outside [0,1], negative costs, an MR without links).
NetworkInstance parse_instance(std::string_view text);

/// Reads and parses a file; InstanceError if it cannot be read.
NetworkInstance load_instance(const std::filesystem::path& path);

enum class Violation { None, WrongSize, NotCandidate, Cycle, TooDeep };

struct ValidationResult {
  Violation violation = Violation::None;
  std::string detail;

  explicit operator bool() const { return violation == Violation::None; }
};

ValidationResult validate_assignment(const NetworkInstance& inst, const RouteAssignment& a);

/// Canonical `mr=parent;...` form, MRs in id order.
std::string to_string(const NetworkInstance& inst, const RouteAssignment& a);

/// Inverse of `to_string`. Throws ContractViolation if an entry does not name
/// a candidate link or an MR is missing.
RouteAssignment assignment_from_string(const NetworkInstance& inst, std::string_view text);

/// Cost of MR `mr`'s path up to its AR. `a` must be valid.
double path_cost(const NetworkInstance& inst, const RouteAssignment& a, std::size_t mr);

/// Both throw ContractViolation on an invalid assignment.
double cost_z1(const NetworkInstance& inst, const RouteAssignment& a);
double risk_z2(const NetworkInstance& inst, const RouteAssignment& a);

/// Randomized topological attachment: MRs in random order each pick
/// uniformly among links whose parent is already rooted and within depth.
/// Throws InstanceError when no complete attachment is found after retries.
RouteAssignment random_assignment(const NetworkInstance& inst, Rng& rng);

/// Moves one uniformly chosen MR to a uniformly chosen different link that
/// keeps the forest valid; unchanged when that MR has no such link.
RouteAssignment mutate_reattach(const NetworkInstance& inst, const RouteAssignment& a, Rng& rng);

/// `mutate_reattach` applied to ceil(|MR|/2) distinct MRs.
RouteAssignment mutate_reattach_heavy(const NetworkInstance& inst, const RouteAssignment& a,
                                      Rng& rng);

/// Each MR takes its link from `a` or `b` with probability 1/2; MRs left
/// without a valid path are re-attached by the randomized topological rule.
RouteAssignment crossover_parentmix(const NetworkInstance& inst, const RouteAssignment& a,
                                    const RouteAssignment& b, Rng& rng);

/// Every valid assignment differing from `a` in exactly one MR, ordered by
/// (MR, candidate link).
std::vector<RouteAssignment> neighborhood(const NetworkInstance& inst, const RouteAssignment& a);

struct OraclePoint {
  ObjectiveVector objectives;
  RouteAssignment witness;  // canonically smallest assignment reaching `objectives`
};

inline constexpr std::size_t kOracleLimit = 1'000'000;

/// Exact Pareto front by exhaustive enumeration, sorted by objectives.
/// Throws OracleScopeError when the raw search space exceeds `limit`.
std::vector<OraclePoint> brute_force_pareto(const NetworkInstance& inst,
                                            std::size_t limit = kOracleLimit);

/// Adapter exposing an instance through the `mema::Problem` concept.
class NetworkProblem {
 public:
  using genotype_type = RouteAssignment;

  explicit NetworkProblem(NetworkInstance inst) : inst_(std::move(inst)) {}

  [[nodiscard]] const NetworkInstance& instance() const { return inst_; }
  [[nodiscard]] std::size_t objective_count() const { return 2; }

  /// (z1, z2). Throws ValidityError naming the violated constraint.
  [[nodiscard]] ObjectiveVector evaluate(const RouteAssignment& a) const;
  [[nodiscard]] bool is_valid(const RouteAssignment& a) const {
    return static_cast<bool>(validate_assignment(inst_, a));
  }
  [[nodiscard]] std::string key(const RouteAssignment& a) const { return to_string(inst_, a); }

  RouteAssignment random_genotype(Rng& rng) const { return random_assignment(inst_, rng); }
  RouteAssignment mutate(const RouteAssignment& a, Rng& rng) const {
    return mutate_reattach(inst_, a, rng);
  }
  RouteAssignment heavy_mutate(const RouteAssignment& a, Rng& rng) const {
    return mutate_reattach_heavy(inst_, a, rng);
  }
  RouteAssignment crossover(const RouteAssignment& a, const RouteAssignment& b, Rng& rng) const {
    return crossover_parentmix(inst_, a, b, rng);
  }
  [[nodiscard]] std::vector<RouteAssignment> neighborhood(const RouteAssignment& a) const {
    return net::neighborhood(inst_, a);
  }

 private:
  NetworkInstance inst_;
};

}  // namespace mema::net
