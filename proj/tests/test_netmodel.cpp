#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mema/netmodel.hpp"
#include "mema/report.hpp"

using namespace mema::net;

namespace {

NetworkInstance fixture(const char* name) {
  return load_instance(std::string(MEMA_DATA_DIR "/instances/") + name);
}

RouteAssignment from(const NetworkInstance& inst, const char* text) {
  return assignment_from_string(inst, text);
}

std::size_t differing(const RouteAssignment& a, const RouteAssignment& b) {
  std::size_t d = 0;
  for (std::size_t i = 0; i < a.link.size(); ++i) d += a.link[i] != b.link[i];
  return d;
}

// Independent evaluator for the oracle cross-check: walks parent ids by name
// through the raw record text, sharing nothing with the library's path code.
struct TextModel {
  std::map<std::string, double> bs_p;
  std::map<std::string, std::string> ar_bs;
  std::map<std::pair<std::string, std::string>, std::pair<double, double>> link;  // cost, p
  std::vector<std::string> mrs;
  std::map<std::string, std::vector<std::string>> parents;
  std::size_t max_depth = 4;

  explicit TextModel(const std::string& text) {
    std::istringstream in(text);
    for (std::string line; std::getline(in, line);) {
      if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
      std::istringstream f(line);
      std::string kw;
      if (!(f >> kw)) continue;
      if (kw == "BS") { std::string id; double p; f >> id >> p; bs_p[id] = p; }
      if (kw == "AR") { std::string id, bs; f >> id >> bs; ar_bs[id] = bs; }
      if (kw == "MR") { std::string id; f >> id; mrs.push_back(id); }
      if (kw == "LINK") {
        std::string c, p; double cost, fp;
        f >> c >> p >> cost >> fp;
        link[{c, p}] = {cost, fp};
        parents[c].push_back(p);
      }
      if (kw == "MAXDEPTH") f >> max_depth;
    }
    std::sort(mrs.begin(), mrs.end());
  }

  // nullopt-like: returns false if invalid
  bool evaluate(const std::map<std::string, std::string>& parent, double& z1, double& z2) const {
    z1 = 0.0;
    z2 = 0.0;
    for (const auto& m : mrs) {
      std::string cur = m;
      double cost = 0.0, survive = 1.0;
      std::size_t depth = 0;
      while (!ar_bs.count(cur)) {
        const std::string& p = parent.at(cur);
        const auto& [c, fp] = link.at({cur, p});
        cost += c;
        survive *= 1.0 - fp;
        cur = p;
        if (++depth > max_depth) return false;
      }
      survive *= 1.0 - bs_p.at(ar_bs.at(cur));
      z1 += cost;
      z2 += 1.0 - survive;
    }
    return true;
  }

  std::set<std::pair<double, double>> exact_front() const {
    std::vector<std::pair<double, double>> all;
    std::map<std::string, std::string> parent;
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
      if (i == mrs.size()) {
        double z1, z2;
        if (evaluate(parent, z1, z2)) all.emplace_back(z1, z2);
        return;
      }
      for (const auto& p : parents.at(mrs[i])) {
        parent[mrs[i]] = p;
        rec(i + 1);
      }
    };
    rec(0);
    std::set<std::pair<double, double>> front;
    for (const auto& a : all) {
      bool dominated = false;
      for (const auto& b : all) {
        if (b.first <= a.first && b.second <= a.second && b != a) dominated = true;
      }
      if (!dominated) front.insert(a);
    }
    return front;
  }
};

const char* kTiny = R"(
BS b1 0.2
AR a1 b1
MR m1
LINK m1 a1 5 0.1
)";

const char* kNested = R"(
BS b1 0
AR a1 b1
MR m1
MR m2
LINK m1 a1 2 0
LINK m2 m1 1 0
LINK m2 a1 9 0
MAXDEPTH 2
)";

}  // namespace

TEST_CASE("parse a minimal instance") {
  const auto inst = parse_instance(kTiny);
  CHECK(inst.base_stations.size() == 1);
  CHECK(inst.access_routers.size() == 1);
  CHECK(inst.mobile_routers.size() == 1);
  CHECK(inst.links.size() == 1);
  CHECK(inst.max_depth == NetworkInstance::kDefaultMaxDepth);
}

TEST_CASE("parse rejects bad instances") {
  CHECK_THROWS_AS(parse_instance("BS b1 0\nAR a1 b1\nMR m1\nLINK m1 a9 1 0\n"), mema::InstanceError);
  CHECK_THROWS_AS(parse_instance("BS b1 1.3\nAR a1 b1\nMR m1\nLINK m1 a1 1 0\n"), mema::InstanceError);
  CHECK_THROWS_AS(parse_instance("BS b1 0\nAR a1 b1\nMR m1\nLINK m1 a1 -1 0\n"), mema::InstanceError);
  CHECK_THROWS_AS(parse_instance("BS b1 0\nAR a1 b2\nMR m1\nLINK m1 a1 1 0\n"), mema::InstanceError);
  CHECK_THROWS_AS(parse_instance("BS b1 0\nAR a1 b1\nMR m1\nMR m2\nLINK m1 a1 1 0\n"), mema::InstanceError);
  CHECK_THROWS_AS(parse_instance("BS b1 0\nAR a1 b1\nMR a1\nLINK a1 a1 1 0\n"), mema::InstanceError);
  CHECK_THROWS_AS(parse_instance("BS b1 0\nAR a1 b1\nMR m1\nLINK m1 m1 1 0\n"), mema::InstanceError);
  CHECK_THROWS_AS(parse_instance("BS b1 0\nAR a1 b1\nMR m1\nLINK m1 a1 1 0\nLINK m1 a1 2 0\n"),
                  mema::InstanceError);
}

TEST_CASE("parse errors carry the line number") {
  try {
    parse_instance("# header\nBS b1 0\nAR a1\n");
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.line == 3);
  }
  CHECK_THROWS_AS(parse_instance("BS b1 zero\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("ROUTER x\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("MAXDEPTH 0\n"), ParseError);
  CHECK_THROWS_AS(parse_instance("MR m=1\n"), ParseError);
}

TEST_CASE("records may appear in any order") {
  const auto a = parse_instance("LINK m1 a1 1 0\nMR m1\nAR a1 b1\nBS b1 0\n");
  CHECK(a.links.size() == 1);
  CHECK(load_instance(MEMA_DATA_DIR "/instances/three_mr.net").candidates[0].size() == 4);
  CHECK_THROWS_AS(load_instance(MEMA_DATA_DIR "/instances/does_not_exist.net"), mema::InstanceError);
}

TEST_CASE("validate_assignment") {
  const auto inst = fixture("three_mr.net");
  CHECK(validate_assignment(inst, from(inst, "m1=a1;m2=a1;m3=a2")));
  const auto cycle = validate_assignment(inst, from(inst, "m1=m2;m2=m1;m3=a1"));
  CHECK(cycle.violation == Violation::Cycle);

  auto shallow = inst;
  shallow.max_depth = 2;
  const auto deep = validate_assignment(shallow, from(inst, "m1=a1;m2=m1;m3=m2"));
  CHECK(deep.violation == Violation::TooDeep);
  CHECK(validate_assignment(inst, from(inst, "m1=a1;m2=m1;m3=m2")));

  CHECK(validate_assignment(inst, RouteAssignment{{0, 4}}).violation == Violation::WrongSize);
  CHECK(validate_assignment(inst, RouteAssignment{{0, 0, 0}}).violation == Violation::NotCandidate);
}

TEST_CASE("canonical genotype strings round trip") {
  const auto inst = fixture("five_mr.net");
  mema::Rng rng(4);
  for (int i = 0; i < 200; ++i) {
    const auto a = random_assignment(inst, rng);
    REQUIRE(assignment_from_string(inst, to_string(inst, a)) == a);
  }
  CHECK_THROWS_AS(assignment_from_string(inst, "m1=a1"), mema::ContractViolation);
  CHECK_THROWS_AS(assignment_from_string(inst, "m1=zz;m2=a1;m3=a1;m4=a1;m5=a1"),
                  mema::ContractViolation);
}

TEST_CASE("objective examples") {
  const auto tiny = parse_instance(kTiny);
  const auto a = from(tiny, "m1=a1");
  CHECK(cost_z1(tiny, a) == 5.0);
  CHECK(risk_z2(tiny, a) == doctest::Approx(0.28).epsilon(1e-15));

  const auto nested = parse_instance(kNested);
  const auto n = from(nested, "m1=a1;m2=m1");
  CHECK(cost_z1(nested, n) == 5.0);  // 2 + (1 + 2)
  CHECK(risk_z2(nested, n) == 0.0);

  const auto chain = parse_instance("BS b 0\nAR a b\nMR x\nMR y\nLINK x a 3 0\nLINK y x 2 0\n");
  CHECK(path_cost(chain, from(chain, "x=a;y=x"), 1) == 5.0);  // 2 + 3

  auto certain = tiny;
  certain.base_stations[0].failure_probability = 1.0;
  CHECK(risk_z2(certain, a) == 1.0);

  auto free_links = fixture("three_mr.net");
  for (auto& l : free_links.links) l.cost = 0.0;
  CHECK(cost_z1(free_links, from(free_links, "m1=a1;m2=m1;m3=a2")) == 0.0);

  CHECK_THROWS_AS(cost_z1(nested, RouteAssignment{{1, 2}}), mema::ContractViolation);
}

TEST_CASE("objective bounds and monotonicity under random perturbation") {
  const auto base = fixture("five_mr.net");
  mema::Rng rng(17);
  for (int trial = 0; trial < 2000; ++trial) {
    const auto a = random_assignment(base, rng);
    const double z1 = cost_z1(base, a);
    const double z2 = risk_z2(base, a);
    REQUIRE(z1 >= 0.0);
    REQUIRE(z2 >= 0.0);
    REQUIRE(z2 <= static_cast<double>(base.mobile_routers.size()));

    auto worse = base;
    const std::size_t used = a.link[rng.index(a.link.size())];
    worse.links[used].failure_probability =
        std::min(1.0, worse.links[used].failure_probability + rng.uniform());
    worse.links[used].cost += rng.uniform() * 5.0;
    REQUIRE(risk_z2(worse, a) >= z2);
    REQUIRE(cost_z1(worse, a) >= z1);

    auto bs_worse = base;
    auto& bs = bs_worse.base_stations[rng.index(bs_worse.base_stations.size())];
    bs.failure_probability = std::min(1.0, bs.failure_probability + rng.uniform());
    REQUIRE(risk_z2(bs_worse, a) >= z2);
  }
}

TEST_CASE("all failure probabilities zero gives zero risk") {
  auto inst = fixture("five_mr.net");
  for (auto& l : inst.links) l.failure_probability = 0.0;
  for (auto& b : inst.base_stations) b.failure_probability = 0.0;
  mema::Rng rng(2);
  for (int i = 0; i < 100; ++i) REQUIRE(risk_z2(inst, random_assignment(inst, rng)) == 0.0);
}

TEST_CASE("random_assignment") {
  const auto tiny = parse_instance(kTiny);
  mema::Rng rng(1);
  CHECK(random_assignment(tiny, rng) == from(tiny, "m1=a1"));

  const auto inst = fixture("three_mr.net");
  std::set<std::string> seen;
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_assignment(inst, rng);
    REQUIRE(validate_assignment(inst, a));
    seen.insert(to_string(inst, a));
  }
  // Every valid forest of the fixture is reachable.
  std::size_t valid = 0;
  RouteAssignment a{{0, 0, 0}};
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      for (std::size_t k = 0; k < 4; ++k) {
        a.link = {inst.candidates[0][i], inst.candidates[1][j], inst.candidates[2][k]};
        valid += validate_assignment(inst, a) ? 1 : 0;
      }
  CHECK(seen.size() == valid);

  mema::Rng r1(99), r2(99);
  CHECK(random_assignment(inst, r1) == random_assignment(inst, r2));
}

TEST_CASE("random_assignment reports an infeasible instance") {
  // m1 and m2 can only hang off each other.
  const auto inst = parse_instance("BS b 0\nAR a b\nMR m1\nMR m2\nLINK m1 m2 1 0\nLINK m2 m1 1 0\n");
  mema::Rng rng(1);
  CHECK_THROWS_AS(random_assignment(inst, rng), mema::InstanceError);
}

TEST_CASE("mutate_reattach") {
  const auto tiny = parse_instance(kTiny);
  mema::Rng rng(5);
  const auto only = from(tiny, "m1=a1");
  CHECK(mutate_reattach(tiny, only, rng) == only);

  const auto inst = fixture("five_mr.net");
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_assignment(inst, rng);
    const auto b = mutate_reattach(inst, a, rng);
    const auto c = mutate_reattach_heavy(inst, a, rng);
    REQUIRE(validate_assignment(inst, b));
    REQUIRE(validate_assignment(inst, c));
    REQUIRE(differing(a, b) <= 1);
    REQUIRE(differing(a, c) <= 3);
  }
}

TEST_CASE("crossover_parentmix") {
  const auto inst = fixture("five_mr.net");
  mema::Rng rng(6);
  for (int i = 0; i < 1000; ++i) {
    const auto a = random_assignment(inst, rng);
    const auto b = random_assignment(inst, rng);
    REQUIRE(crossover_parentmix(inst, a, a, rng) == a);
    REQUIRE(validate_assignment(inst, crossover_parentmix(inst, a, b, rng)));
  }
  // Parents attached straight to ARs mix without repair.
  const auto a = from(inst, "m1=a1;m2=a1;m3=a1;m4=a1;m5=a1");
  const auto b = from(inst, "m1=a3;m2=a2;m3=a3;m4=a2;m5=a3");
  for (int i = 0; i < 200; ++i) {
    const auto c = crossover_parentmix(inst, a, b, rng);
    for (std::size_t m = 0; m < c.link.size(); ++m) {
      REQUIRE((c.link[m] == a.link[m] || c.link[m] == b.link[m]));
    }
  }
}

TEST_CASE("neighborhood matches hand counts on the 3-MR fixture") {
  const auto inst = fixture("three_mr.net");
  const auto flat = from(inst, "m1=a1;m2=a1;m3=a1");
  const auto n1 = neighborhood(inst, flat);
  CHECK(n1.size() == 9);  // 3 MRs x (other AR + 2 other MRs)

  const auto chain = from(inst, "m1=a1;m2=m1;m3=m2");
  const auto n2 = neighborhood(inst, chain);
  // m1: a2 only; m2: a1, a2; m3: a1, a2, m1
  CHECK(n2.size() == 6);
  for (const auto& n : n2) {
    CHECK(validate_assignment(inst, n));
    CHECK(n != chain);
    CHECK(differing(n, chain) == 1);
  }
}

TEST_CASE("brute force on a single MR with two links") {
  const auto inst = fixture("one_mr.net");
  const auto front = brute_force_pareto(inst);
  REQUIRE(front.size() == 2);
  CHECK(front[0].objectives == mema::ObjectiveVector{1.0, 1.0 - 0.7 * (1.0 - 0.0)});
  CHECK(front[1].objectives == mema::ObjectiveVector{5.0, 0.0});
}

TEST_CASE("brute force with one valid assignment and past the guard") {
  const auto single = parse_instance("BS b 0\nAR a b\nMR x\nMR y\nLINK x a 1 0.1\nLINK y x 1 0.1\n");
  CHECK(brute_force_pareto(single).size() == 1);

  std::string big = "BS b 0\n";
  for (int a = 0; a < 8; ++a) big += "AR a" + std::to_string(a) + " b\n";
  for (int m = 0; m < 7; ++m) {
    big += "MR m" + std::to_string(m) + "\n";
    for (int a = 0; a < 8; ++a) big += "LINK m" + std::to_string(m) + " a" + std::to_string(a) + " 1 0\n";
  }
  CHECK_THROWS_AS(brute_force_pareto(parse_instance(big)), mema::OracleScopeError);
}

TEST_CASE("brute force agrees with an independent enumeration") {
  for (const char* name : {"one_mr.net", "three_mr.net", "five_mr.net"}) {
    const auto text = mema::read_file(std::string(MEMA_DATA_DIR "/instances/") + name);
    const auto inst = parse_instance(text);
    const auto front = brute_force_pareto(inst);
    std::set<std::pair<double, double>> got;
    const NetworkProblem problem(inst);
    for (const auto& p : front) {
      REQUIRE(validate_assignment(inst, p.witness));
      REQUIRE(problem.evaluate(p.witness) == p.objectives);
      got.emplace(p.objectives[0], p.objectives[1]);
    }
    const auto expected = TextModel(text).exact_front();
    REQUIRE(got.size() == expected.size());
    auto e = expected.begin();
    for (const auto& g : got) {
      CHECK(g.first == doctest::Approx(e->first).epsilon(1e-12));
      CHECK(g.second == doctest::Approx(e->second).epsilon(1e-12));
      ++e;
    }
  }
}

TEST_CASE("committed oracle fronts are current") {
  for (const char* name : {"one_mr", "three_mr", "five_mr"}) {
    const auto inst = fixture((std::string(name) + ".net").c_str());
    std::vector<mema::FrontRow> rows;
    for (const auto& p : brute_force_pareto(inst)) rows.push_back({p.objectives, to_string(inst, p.witness)});
    CHECK(mema::front_csv(rows) ==
          mema::read_file(std::string(MEMA_DATA_DIR "/fronts/") + name + ".csv"));
  }
}
