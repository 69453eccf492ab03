#include "mema/netmodel.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <tuple>

#include "mema/archive.hpp"

namespace mema::net {

namespace {

constexpr std::size_t kUnattached = static_cast<std::size_t>(-1);
constexpr int kAttachRetries = 100;

bool valid_id(std::string_view id) {
  return !id.empty() && std::all_of(id.begin(), id.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '_';
  });
}

double parse_number(std::string_view token, std::size_t line, const char* what) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
  if (ec != std::errc{} || ptr != token.data() + token.size() || !std::isfinite(v)) {
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  }
  return v;
}

void check_probability(double p, const std::string& owner) {
  if (p < 0.0 || p > 1.0) {
    throw InstanceError("failure probability of " + owner + " outside [0,1]");
  }
}

struct RawLink {
  std::string child, parent;
  double cost, p;
  std::size_t line;
};

// Depth of each MR under `a`, or nullopt for MRs whose path does not reach an
// AR within max_depth links.
std::vector<std::optional<std::size_t>> rooted_depths(const NetworkInstance& inst,
                                                      const RouteAssignment& a) {
  const std::size_t n = inst.mobile_routers.size();
  std::vector<std::optional<std::size_t>> depth(n);
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t cur = m;
    for (std::size_t steps = 1; steps <= inst.max_depth; ++steps) {
      const Link& l = inst.links[a.link[cur]];
      if (l.parent.is_access_router()) {
        depth[m] = steps;
        break;
      }
      cur = l.parent.index;
    }
  }
  return depth;
}

// Attaches every MR in `pending` (in that order, with deferral passes) to a
// link whose parent is rooted and leaves room in depth. `depth` holds the
// depth of attached MRs and kUnattached otherwise.
bool attach_pending(const NetworkInstance& inst, RouteAssignment& a,
                    std::vector<std::size_t>& depth, std::vector<std::size_t> pending, Rng& rng) {
  std::vector<std::size_t> options;
  while (!pending.empty()) {
    std::vector<std::size_t> deferred;
    for (std::size_t m : pending) {
      options.clear();
      for (std::size_t li : inst.candidates[m]) {
        const NodeRef& p = inst.links[li].parent;
        const std::size_t parent_depth = p.is_access_router() ? 0 : depth[p.index];
        if (parent_depth != kUnattached && parent_depth + 1 <= inst.max_depth) options.push_back(li);
      }
      if (options.empty()) {
        deferred.push_back(m);
        continue;
      }
      const std::size_t li = options[rng.index(options.size())];
      a.link[m] = li;
      const NodeRef& p = inst.links[li].parent;
      depth[m] = (p.is_access_router() ? 0 : depth[p.index]) + 1;
    }
    if (deferred.size() == pending.size()) return false;
    pending = std::move(deferred);
  }
  return true;
}

RouteAssignment reattach_one(const NetworkInstance& inst, const RouteAssignment& a, std::size_t mr,
                             Rng& rng) {
  std::vector<RouteAssignment> alternatives;
  for (std::size_t li : inst.candidates[mr]) {
    if (li == a.link[mr]) continue;
    RouteAssignment b = a;
    b.link[mr] = li;
    if (validate_assignment(inst, b)) alternatives.push_back(std::move(b));
  }
  if (alternatives.empty()) return a;
  return alternatives[rng.index(alternatives.size())];
}

}  // namespace

NetworkInstance parse_instance(std::string_view text) {
  std::vector<std::pair<BaseStation, std::size_t>> bss;
  std::vector<std::tuple<std::string, std::string, std::size_t>> ars;  // id, bs id, line
  std::vector<std::pair<std::string, std::size_t>> mrs;
  std::vector<RawLink> raw_links;
  std::optional<std::size_t> max_depth;

  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.erase(hash);
    std::istringstream fields(raw);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(std::move(t));
    if (tok.empty()) continue;

    const std::string& kw = tok[0];
    auto expect = [&](std::size_t n) {
      if (tok.size() != n) {
        throw ParseError(line_no, kw + " expects " + std::to_string(n - 1) + " fields, got " +
                                      std::to_string(tok.size() - 1));
      }
    };
    auto id_at = [&](std::size_t i) -> const std::string& {
      if (!valid_id(tok[i])) throw ParseError(line_no, "invalid id '" + tok[i] + "'");
      return tok[i];
    };
    if (kw == "BS") {
      expect(3);
      bss.push_back({{id_at(1), parse_number(tok[2], line_no, "probability")}, line_no});
    } else if (kw == "AR") {
      expect(3);
      ars.emplace_back(id_at(1), id_at(2), line_no);
    } else if (kw == "MR") {
      expect(2);
      mrs.emplace_back(id_at(1), line_no);
    } else if (kw == "LINK") {
      expect(5);
      raw_links.push_back({id_at(1), id_at(2), parse_number(tok[3], line_no, "cost"),
                           parse_number(tok[4], line_no, "probability"), line_no});
    } else if (kw == "MAXDEPTH") {
      expect(2);
      if (max_depth) throw ParseError(line_no, "MAXDEPTH given twice");
      std::size_t k = 0;
      const auto [ptr, ec] = std::from_chars(tok[1].data(), tok[1].data() + tok[1].size(), k);
      if (ec != std::errc{} || ptr != tok[1].data() + tok[1].size() || k == 0) {
        throw ParseError(line_no, "MAXDEPTH must be a positive integer");
      }
      max_depth = k;
    } else {
      throw ParseError(line_no, "unknown record '" + kw + "'");
    }
  }

  NetworkInstance inst;
  inst.max_depth = max_depth.value_or(NetworkInstance::kDefaultMaxDepth);

  std::map<std::string, std::size_t> seen;  // id -> line
  auto claim = [&](const std::string& id, std::size_t line) {
    if (auto [it, fresh] = seen.emplace(id, line); !fresh) {
      throw InstanceError("duplicate id '" + id + "' (lines " + std::to_string(it->second) +
                          " and " + std::to_string(line) + ")");
    }
  };
  for (const auto& [bs, line] : bss) claim(bs.id, line);
  for (const auto& [id, bs, line] : ars) claim(id, line);
  for (const auto& [id, line] : mrs) claim(id, line);

  for (const auto& [bs, line] : bss) {
    check_probability(bs.failure_probability, "base station '" + bs.id + "'");
    inst.base_stations.push_back(bs);
  }
  std::sort(inst.base_stations.begin(), inst.base_stations.end(),
            [](const BaseStation& a, const BaseStation& b) { return a.id < b.id; });
  std::map<std::string, std::size_t> bs_index;
  for (std::size_t i = 0; i < inst.base_stations.size(); ++i) bs_index[inst.base_stations[i].id] = i;

  for (const auto& [id, bs, line] : ars) {
    auto it = bs_index.find(bs);
    if (it == bs_index.end()) {
      throw InstanceError("access router '" + id + "' references unknown base station '" + bs + "'");
    }
    inst.access_routers.push_back({id, it->second});
  }
  std::sort(inst.access_routers.begin(), inst.access_routers.end(),
            [](const AccessRouter& a, const AccessRouter& b) { return a.id < b.id; });

  for (const auto& [id, line] : mrs) inst.mobile_routers.push_back(id);
  std::sort(inst.mobile_routers.begin(), inst.mobile_routers.end());

  std::map<std::string, NodeRef> nodes;
  for (std::size_t i = 0; i < inst.access_routers.size(); ++i) {
    nodes[inst.access_routers[i].id] = {NodeRef::Kind::AccessRouter, i};
  }
  for (std::size_t i = 0; i < inst.mobile_routers.size(); ++i) {
    nodes[inst.mobile_routers[i]] = {NodeRef::Kind::MobileRouter, i};
  }

  std::map<std::pair<std::size_t, std::string>, std::size_t> link_lines;
  for (const RawLink& r : raw_links) {
    auto child = nodes.find(r.child);
    if (child == nodes.end() || child->second.is_access_router()) {
      throw InstanceError("link child '" + r.child + "' is not a mobile router");
    }
    auto parent = nodes.find(r.parent);
    if (parent == nodes.end()) {
      throw InstanceError("link parent '" + r.parent + "' is not an access or mobile router");
    }
    if (r.child == r.parent) throw InstanceError("link from '" + r.child + "' to itself");
    if (r.cost < 0.0) throw InstanceError("negative cost on link " + r.child + "->" + r.parent);
    check_probability(r.p, "link " + r.child + "->" + r.parent);
    if (!link_lines.emplace(std::pair{child->second.index, r.parent}, r.line).second) {
      throw InstanceError("duplicate link " + r.child + "->" + r.parent);
    }
    inst.links.push_back({child->second.index, parent->second, r.cost, r.p});
  }
  std::sort(inst.links.begin(), inst.links.end(), [&](const Link& a, const Link& b) {
    if (a.child != b.child) return a.child < b.child;
    return inst.node_id(a.parent) < inst.node_id(b.parent);
  });

  inst.candidates.assign(inst.mobile_routers.size(), {});
  for (std::size_t i = 0; i < inst.links.size(); ++i) inst.candidates[inst.links[i].child].push_back(i);
  for (std::size_t m = 0; m < inst.mobile_routers.size(); ++m) {
    if (inst.candidates[m].empty()) {
      throw InstanceError("mobile router '" + inst.mobile_routers[m] + "' has no candidate link");
    }
  }
  return inst;
}

NetworkInstance load_instance(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InstanceError("cannot read instance file '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_instance(buf.str());
}

ValidationResult validate_assignment(const NetworkInstance& inst, const RouteAssignment& a) {
  const std::size_t n = inst.mobile_routers.size();
  if (a.link.size() != n) {
    return {Violation::WrongSize, "assignment has " + std::to_string(a.link.size()) +
                                      " entries for " + std::to_string(n) + " mobile routers"};
  }
  for (std::size_t m = 0; m < n; ++m) {
    if (a.link[m] >= inst.links.size() || inst.links[a.link[m]].child != m) {
      return {Violation::NotCandidate,
              "mobile router '" + inst.mobile_routers[m] + "' uses a link that is not its candidate"};
    }
  }
  for (std::size_t m = 0; m < n; ++m) {
    std::size_t cur = m;
    std::size_t steps = 0;
    while (true) {
      const Link& l = inst.links[a.link[cur]];
      ++steps;
      if (l.parent.is_access_router()) {
        if (steps > inst.max_depth) {
          return {Violation::TooDeep, "mobile router '" + inst.mobile_routers[m] + "' is " +
                                          std::to_string(steps) + " links from its access router (max " +
                                          std::to_string(inst.max_depth) + ")"};
        }
        break;
      }
      if (steps > n) {
        return {Violation::Cycle, "cycle through mobile router '" + inst.mobile_routers[m] + "'"};
      }
      cur = l.parent.index;
    }
  }
  return {};
}

std::string to_string(const NetworkInstance& inst, const RouteAssignment& a) {
  std::string out;
  for (std::size_t m = 0; m < a.link.size(); ++m) {
    if (m) out += ';';
    out += inst.mobile_routers.at(m);
    out += '=';
    out += inst.node_id(inst.links.at(a.link[m]).parent);
  }
  return out;
}

RouteAssignment assignment_from_string(const NetworkInstance& inst, std::string_view text) {
  RouteAssignment a{std::vector<std::size_t>(inst.mobile_routers.size(), kUnattached)};
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t end = std::min(text.find(';', start), text.size());
    const std::string_view entry = text.substr(start, end - start);
    const std::size_t eq = entry.find('=');
    if (eq == std::string_view::npos) {
      throw ContractViolation("assignment entry '" + std::string(entry) + "' lacks '='");
    }
    const std::string child(entry.substr(0, eq));
    const std::string parent(entry.substr(eq + 1));
    auto it = std::lower_bound(inst.mobile_routers.begin(), inst.mobile_routers.end(), child);
    if (it == inst.mobile_routers.end() || *it != child) {
      throw ContractViolation("unknown mobile router '" + child + "'");
    }
    const auto m = static_cast<std::size_t>(it - inst.mobile_routers.begin());
    bool found = false;
    for (std::size_t li : inst.candidates[m]) {
      if (inst.node_id(inst.links[li].parent) == parent) {
        a.link[m] = li;
        found = true;
      }
    }
    if (!found) throw ContractViolation("no candidate link " + child + "->" + parent);
    start = end + 1;
  }
  for (std::size_t m = 0; m < a.link.size(); ++m) {
    if (a.link[m] == kUnattached) {
      throw ContractViolation("mobile router '" + inst.mobile_routers[m] + "' not assigned");
    }
  }
  return a;
}

double path_cost(const NetworkInstance& inst, const RouteAssignment& a, std::size_t mr) {
  double cost = 0.0;
  for (std::size_t cur = mr;;) {
    const Link& l = inst.links[a.link[cur]];
    cost += l.cost;
    if (l.parent.is_access_router()) return cost;
    cur = l.parent.index;
  }
}

namespace {

double unchecked_z1(const NetworkInstance& inst, const RouteAssignment& a) {
  double z1 = 0.0;
  for (std::size_t m = 0; m < inst.mobile_routers.size(); ++m) z1 += path_cost(inst, a, m);
  return z1;
}

double unchecked_z2(const NetworkInstance& inst, const RouteAssignment& a) {
  double z2 = 0.0;
  for (std::size_t m = 0; m < inst.mobile_routers.size(); ++m) {
    double survive = 1.0;
    for (std::size_t cur = m;;) {
      const Link& l = inst.links[a.link[cur]];
      survive *= 1.0 - l.failure_probability;
      if (l.parent.is_access_router()) {
        const AccessRouter& ar = inst.access_routers[l.parent.index];
        survive *= 1.0 - inst.base_stations[ar.base_station].failure_probability;
        break;
      }
      cur = l.parent.index;
    }
    z2 += 1.0 - survive;
  }
  return z2;
}

void require_valid(const NetworkInstance& inst, const RouteAssignment& a) {
  if (auto v = validate_assignment(inst, a); !v) throw ContractViolation(v.detail);
}

}  // namespace

double cost_z1(const NetworkInstance& inst, const RouteAssignment& a) {
  require_valid(inst, a);
  return unchecked_z1(inst, a);
}

double risk_z2(const NetworkInstance& inst, const RouteAssignment& a) {
  require_valid(inst, a);
  return unchecked_z2(inst, a);
}

ObjectiveVector NetworkProblem::evaluate(const RouteAssignment& a) const {
  if (auto v = validate_assignment(inst_, a); !v) throw ValidityError(v.detail);
  return ObjectiveVector{unchecked_z1(inst_, a), unchecked_z2(inst_, a)};
}

RouteAssignment random_assignment(const NetworkInstance& inst, Rng& rng) {
  const std::size_t n = inst.mobile_routers.size();
  for (int attempt = 0; attempt < kAttachRetries; ++attempt) {
    RouteAssignment a{std::vector<std::size_t>(n, kUnattached)};
    std::vector<std::size_t> depth(n, kUnattached);
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    rng.shuffle(order);
    if (attach_pending(inst, a, depth, std::move(order), rng)) return a;
  }
  throw InstanceError("no valid route assignment found after " + std::to_string(kAttachRetries) +
                      " randomized attachment attempts");
}

RouteAssignment mutate_reattach(const NetworkInstance& inst, const RouteAssignment& a, Rng& rng) {
  return reattach_one(inst, a, rng.index(inst.mobile_routers.size()), rng);
}

RouteAssignment mutate_reattach_heavy(const NetworkInstance& inst, const RouteAssignment& a,
                                      Rng& rng) {
  const std::size_t n = inst.mobile_routers.size();
  const std::size_t k = (n + 1) / 2;
  std::vector<std::size_t> mrs(n);
  std::iota(mrs.begin(), mrs.end(), std::size_t{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(mrs[i], mrs[i + rng.index(n - i)]);
  RouteAssignment out = a;
  for (std::size_t i = 0; i < k; ++i) out = reattach_one(inst, out, mrs[i], rng);
  return out;
}

RouteAssignment crossover_parentmix(const NetworkInstance& inst, const RouteAssignment& a,
                                    const RouteAssignment& b, Rng& rng) {
  const std::size_t n = inst.mobile_routers.size();
  RouteAssignment child{std::vector<std::size_t>(n)};
  for (std::size_t m = 0; m < n; ++m) child.link[m] = rng.bernoulli(0.5) ? a.link[m] : b.link[m];

  const auto rooted = rooted_depths(inst, child);
  std::vector<std::size_t> depth(n, kUnattached);
  std::vector<std::size_t> broken;
  for (std::size_t m = 0; m < n; ++m) {
    if (rooted[m]) depth[m] = *rooted[m];
    else broken.push_back(m);
  }
  if (broken.empty()) return child;

  for (int attempt = 0; attempt < kAttachRetries; ++attempt) {
    RouteAssignment repaired = child;
    std::vector<std::size_t> d = depth;
    std::vector<std::size_t> order = broken;
    rng.shuffle(order);
    if (attach_pending(inst, repaired, d, std::move(order), rng)) return repaired;
  }
  // Rooted MRs left no room for the broken ones; fall back to a valid parent.
  return a;
}

std::vector<RouteAssignment> neighborhood(const NetworkInstance& inst, const RouteAssignment& a) {
  std::vector<RouteAssignment> out;
  for (std::size_t m = 0; m < inst.mobile_routers.size(); ++m) {
    for (std::size_t li : inst.candidates[m]) {
      if (li == a.link[m]) continue;
      RouteAssignment b = a;
      b.link[m] = li;
      if (validate_assignment(inst, b)) out.push_back(std::move(b));
    }
  }
  return out;
}

std::vector<OraclePoint> brute_force_pareto(const NetworkInstance& inst, std::size_t limit) {
  const std::size_t n = inst.mobile_routers.size();
  std::size_t space = 1;
  for (const auto& c : inst.candidates) {
    if (space > limit / c.size()) {
      throw OracleScopeError("search space exceeds the oracle limit of " + std::to_string(limit) +
                             " assignments");
    }
    space *= c.size();
  }

  const NetworkProblem problem(inst);
  NondominatedArchive<RouteAssignment> front;
  std::vector<std::size_t> digit(n, 0);
  RouteAssignment a{std::vector<std::size_t>(n)};
  for (std::size_t count = 0; count < space; ++count) {
    for (std::size_t m = 0; m < n; ++m) a.link[m] = inst.candidates[m][digit[m]];
    if (problem.is_valid(a)) front.merge({a, problem.evaluate(a), problem.key(a)});
    for (std::size_t m = 0; m < n; ++m) {
      if (++digit[m] < inst.candidates[m].size()) break;
      digit[m] = 0;
    }
  }

  std::vector<OraclePoint> out;
  for (const auto& c : front.members()) {
    if (out.empty() || out.back().objectives != c.objectives) out.push_back({c.objectives, c.genotype});
  }
  return out;
}

}  // namespace mema::net
