// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "mema/archive.hpp"
#include "mema/cli.hpp"
#include "mema/engine.hpp"
#include "mema/measures.hpp"
#include "mema/netmodel.hpp"
#include "mema/report.hpp"
#include "mema/scheduler.hpp"

namespace fs = std::filesystem;
using mema::ObjectiveVector;
using mema::net::NetworkProblem;
using mema::net::RouteAssignment;

namespace {

const fs::path kInstances = fs::path(MEMA_DATA_DIR) / "instances";

struct Outcome {
  bool pass;
  std::string detail;
};

std::map<int, std::pair<std::string, Outcome>> results;
std::vector<std::vector<double>> all_traces;

void record(int id, std::string title, bool pass, std::string detail) {
  results[id] = {std::move(title), {pass, std::move(detail)}};
}

std::string fmt(const char* f, auto... args) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

NetworkProblem load(const char* name) { return NetworkProblem(mema::net::load_instance(kInstances / name)); }

// 1. Exact front on the 3-MR fixture.
void exact_front() {
  const auto problem = load("three_mr.net");
  std::vector<ObjectiveVector> oracle;
  for (const auto& o : mema::net::brute_force_pareto(problem.instance())) oracle.push_back(o.objectives);

  std::size_t exact = 0;
  double slowest = 0.0;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    mema::RunParams p;
    p.budget = 10000;
    p.seed = seed;
    const auto t0 = std::chrono::steady_clock::now();
    const auto r = mema::run(problem, p);
    slowest = std::max(slowest, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    all_traces.push_back(r.hv_trace);

    // Equal-objective duplicates collapse: compare objective sets.
    auto got = r.archive.objective_vectors();
    got.erase(std::unique(got.begin(), got.end()), got.end());
    bool same = got.size() == oracle.size();
    for (std::size_t i = 0; same && i < got.size(); ++i) {
      for (std::size_t k = 0; k < 2; ++k) same = same && std::abs(got[i][k] - oracle[i][k]) <= 1e-12;
    }
    exact += same ? 1 : 0;
  }
  record(1, "exact 3-MR front in >= 19/20 seeded runs, each < 5 s", exact >= 19 && slowest < 5.0,
         fmt("%zu/20 exact, slowest run %.3f s", exact, slowest));
}

// 2. Archive invariants under random insert/reduce.
void archive_invariants() {
  mema::Rng rng(2);
  std::size_t dominated_pairs = 0, overflows = 0, lost_extremes = 0, ops = 0;
  int id = 0;
  while (ops < 100000) {
    const std::size_t cap = 2 + rng.index(29);
    mema::NondominatedArchive<int> archive(cap);
    for (int k = 0; k < 1000; ++k, ++ops) {
      const auto policy = rng.bernoulli(0.5) ? mema::ReductionPolicy::Crowding : mema::ReductionPolicy::NearestNeighbor;
      // Integer grid so equal objectives and ties show up.
      const double x = static_cast<double>(rng.index(60));
      const double y = 60.0 - x + static_cast<double>(rng.index(15));
      ++id;
      archive.merge({id, ObjectiveVector{x, y}, std::to_string(id)});

      std::vector<double> lo(2, 1e300), hi(2, -1e300);
      for (const auto& m : archive.members()) {
        for (std::size_t d = 0; d < 2; ++d) {
          lo[d] = std::min(lo[d], m.objectives[d]);
          hi[d] = std::max(hi[d], m.objectives[d]);
        }
      }
      archive.reduce(policy);

      if (archive.size() > cap) ++overflows;
      std::vector<double> lo2(2, 1e300), hi2(2, -1e300);
      for (const auto& a : archive.members()) {
        for (std::size_t d = 0; d < 2; ++d) {
          lo2[d] = std::min(lo2[d], a.objectives[d]);
          hi2[d] = std::max(hi2[d], a.objectives[d]);
        }
        for (const auto& b : archive.members()) {
          if (mema::dominates(a.objectives, b.objectives) == mema::Dominance::Dominates) ++dominated_pairs;
        }
      }
      if (lo != lo2 || hi != hi2) ++lost_extremes;
    }
  }
  record(2, "1e5 insert/reduce: no dominated pair, capacity kept, extremes kept",
         dominated_pairs == 0 && overflows == 0 && lost_extremes == 0,
         fmt("%zu ops, dominated pairs %zu, overflows %zu, lost extremes %zu", ops, dominated_pairs,
             overflows, lost_extremes));
}

// 3. Exact 2-D hypervolume against Monte Carlo.
void hypervolume_vs_monte_carlo() {
  const bool example = mema::hypervolume(std::vector<ObjectiveVector>{{1, 2}, {2, 1}}, {3, 3}) == 3.0;
  mema::Rng rng(3);
  const std::size_t samples = 1000000;
  std::size_t within = 0;
  double worst_z = 0.0;
  for (int f = 0; f < 100; ++f) {
    std::vector<ObjectiveVector> pts;
    const std::size_t n = 1 + rng.index(30);
    for (std::size_t i = 0; i < n; ++i) pts.push_back({rng.uniform(), rng.uniform()});
    const auto front = mema::nondom<int>(
        [&] {
          std::vector<mema::Candidate<int>> c;
          for (std::size_t i = 0; i < pts.size(); ++i) c.push_back({int(i), pts[i], std::to_string(i)});
          return c;
        }())
                           .objective_vectors();
    const ObjectiveVector ref{1.0 + rng.uniform(), 1.0 + rng.uniform()};
    const double exact = mema::hypervolume(front, ref);

    // Staircase lookup: front is sorted by z1 ascending, z2 descending.
    double lo_x = 1e300, lo_y = 1e300;
    for (const auto& p : front) {
      lo_x = std::min(lo_x, p[0]);
      lo_y = std::min(lo_y, p[1]);
    }
    const double box = (ref[0] - lo_x) * (ref[1] - lo_y);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < samples; ++s) {
      const double x = lo_x + rng.uniform() * (ref[0] - lo_x);
      const double y = lo_y + rng.uniform() * (ref[1] - lo_y);
      auto it = std::upper_bound(front.begin(), front.end(), x,
                                 [](double v, const ObjectiveVector& p) { return v < p[0]; });
      if (it != front.begin() && (*std::prev(it))[1] <= y) ++hits;
    }
    const double phat = static_cast<double>(hits) / samples;
    const double estimate = box * phat;
    const double sigma = box * std::sqrt(phat * (1.0 - phat) / samples);
    const double z = sigma > 0 ? std::abs(exact - estimate) / sigma : (exact == estimate ? 0.0 : 1e9);
    worst_z = std::max(worst_z, z);
    within += z <= 3.0 ? 1 : 0;
  }
  record(3, "2-D HV within 3 sigma of 1e6-sample Monte Carlo on 100 fronts; HV example = 3",
         example && within == 100, fmt("%zu/100 within 3 sigma (max %.2f sigma), example %s", within, worst_z,
                                       example ? "exact" : "wrong"));
}

// 5. Scheduler probabilities and sampling.
void scheduler() {
  mema::Rng rng(5);
  std::size_t bad = 0;
  double worst_sum = 0.0;
  for (int w = 0; w < 10000; ++w) {
    const std::size_t n = 1 + rng.index(6);
    const double floor = rng.uniform() / static_cast<double>(n);
    mema::OperatorPool pool(mema::PoolKind::Variation, std::vector<std::string>(n, "op"), 1 + rng.index(100), floor);
    const std::size_t reports = rng.index(300);
    for (std::size_t r = 0; r < reports; ++r) pool.report(rng.index(n), rng.bernoulli(rng.uniform()));
    const auto p = pool.probabilities();
    const double dev = std::abs(std::accumulate(p.begin(), p.end(), 0.0) - 1.0);
    worst_sum = std::max(worst_sum, dev);
    if (dev > 1e-12 || std::any_of(p.begin(), p.end(), [&](double v) { return v < floor; })) ++bad;
  }

  mema::OperatorPool skewed(mema::PoolKind::Variation, {"a", "b"}, 50, 0.1);
  skewed.report(0, true);
  skewed.report(0, true);
  skewed.report(1, false);
  skewed.report(1, false);
  const auto p = skewed.probabilities();
  std::size_t first = 0;
  for (int d = 0; d < 100000; ++d) first += skewed.choose(rng) == 0 ? 1 : 0;
  const double freq = first / 1e5;
  const bool target = std::abs(p[0] - 0.7) <= 1e-12 && std::abs(freq - 0.7) <= 0.01;
  record(5, "scheduler: sum 1 +- 1e-12 and floor on 1e4 windows; (0.7, 0.3) draws within 0.01",
         bad == 0 && target,
         fmt("%zu bad windows (max |sum-1| %.2e), p = (%.12g, %.12g), frequency %.4f", bad, worst_sum, p[0], p[1],
             freq));
}

// 6. Byte-identical outputs for identical config and seed.
void determinism() {
  mema::RunConfig config;
  config.instance = kInstances / "five_mr.net";
  config.params.budget = 10000;
  config.params.seed = 6;
  const auto base = fs::temp_directory_path() / "mema_acceptance_determinism";
  fs::remove_all(base);
  std::ostringstream err;
  config.out_dir = base / "a";
  const int ca = mema::cli::cmd_run(config, err);
  config.out_dir = base / "b";
  const int cb = mema::cli::cmd_run(config, err);
  bool same = ca == 0 && cb == 0;
  std::string detail = "exit codes " + std::to_string(ca) + "/" + std::to_string(cb);
  if (same) {
    const bool front = mema::read_file(base / "a/front.csv") == mema::read_file(base / "b/front.csv");
    auto sa = nlohmann::json::parse(mema::read_file(base / "a/summary.json"));
    auto sb = nlohmann::json::parse(mema::read_file(base / "b/summary.json"));
    std::vector<double> trace = sa["hypervolume_trace"].get<std::vector<double>>();
    all_traces.push_back(trace);
    sa.erase("wall_clock_seconds");
    sb.erase("wall_clock_seconds");
    same = front && sa == sb;
    detail += std::string(", front.csv ") + (front ? "identical" : "differs") + ", summary.json " +
              (sa == sb ? "identical" : "differs") + " apart from wall clock";
  }
  record(6, "identical config and seed give identical front.csv and summary.json", same, detail);
}

// 7. Every operator keeps forests valid on the stress fixture.
void operator_closure() {
  const auto problem = load("five_mr.net");
  const auto& inst = problem.instance();
  mema::Rng rng(7);
  mema::Evaluator eval(problem);
  std::map<std::string, std::size_t> invalid{{"mutate_reattach", 0}, {"crossover_parentmix", 0},
                                             {"local_search", 0}, {"random_immigrants", 0}};
  auto check = [&](const char* op, const RouteAssignment& a) {
    if (!mema::net::validate_assignment(inst, a)) ++invalid[op];
  };

  auto g = mema::net::random_assignment(inst, rng);
  for (int i = 0; i < 10000; ++i) {
    g = mema::net::mutate_reattach(inst, g, rng);
    check("mutate_reattach", g);
  }

  std::vector<RouteAssignment> pool;
  for (int i = 0; i < 20; ++i) pool.push_back(mema::net::random_assignment(inst, rng));
  for (int i = 0; i < 10000; ++i) {
    auto& slot = pool[rng.index(pool.size())];
    slot = mema::net::crossover_parentmix(inst, slot, pool[rng.index(pool.size())], rng);
    check("crossover_parentmix", slot);
  }

  mema::Population<RouteAssignment> one{eval(mema::net::random_assignment(inst, rng))};
  for (int i = 0; i < 10000; ++i) {
    const auto op = i % 2 ? mema::LocalSearchOp::Chebyshev : mema::LocalSearchOp::ParetoStep;
    one = mema::local_search(one, problem, op, 1, mema::Normalization::identity(2), rng, eval);
    check("local_search", one[0].genotype);
    if (i % 50 == 49) one = {eval(mema::net::random_assignment(inst, rng))};
  }

  auto pop = mema::initialize(problem, 10, rng, eval);
  const auto archive = mema::nondom<RouteAssignment>(pop);
  for (int i = 0; i < 10000; ++i) {
    const auto op = i % 2 ? mema::ImmigrationOp::FreshRandom : mema::ImmigrationOp::ArchiveMutation;
    pop = mema::random_immigrants(std::move(pop), archive, problem, op, 3, rng, eval);
    for (const auto& c : pop) check("random_immigrants", c.genotype);
  }

  std::size_t total = 0;
  std::string detail;
  for (const auto& [op, n] : invalid) {
    total += n;
    detail += op + " " + std::to_string(n) + " invalid; ";
  }
  detail.resize(detail.size() - 2);
  record(7, "1e4 applications of each operator on the 5-MR fixture stay valid", total == 0, detail);
}

// 8. Immigration versus none with a stagnating configuration.
void immigration_effect() {
  const auto problem = load("five_mr.net");
  std::vector<std::vector<ObjectiveVector>> with, without;
  std::vector<ObjectiveVector> all;
  for (std::uint64_t seed = 1; seed <= 20; ++seed) {
    for (double rho : {0.0, 0.3}) {
      mema::RunParams p;
      p.population_size = 10;
      p.offspring_count = 10;
      p.ls_moves = 5;
      p.stagnation_window = 2;
      p.budget = 5000;
      p.seed = seed;
      p.immigrant_fraction = rho;
      const auto r = mema::run(problem, p);
      all_traces.push_back(r.hv_trace);
      auto front = r.archive.objective_vectors();
      all.insert(all.end(), front.begin(), front.end());
      (rho == 0.0 ? without : with).push_back(std::move(front));
    }
  }
  const auto ref = mema::reference_point(all);
  std::size_t wins = 0, ties = 0;
  for (std::size_t i = 0; i < with.size(); ++i) {
    const double a = mema::hypervolume(with[i], ref);
    const double b = mema::hypervolume(without[i], ref);
    wins += a > b ? 1 : 0;
    ties += a == b ? 1 : 0;
  }
  record(8, "5-MR fixture, G=2: HV(rho=0.3) >= HV(rho=0) in >= 15/20 paired seeds", wins + ties >= 15,
         fmt("%zu/20 (%zu strictly better, %zu equal), common reference (%.6g, %.6g)", wins + ties, wins, ties,
             ref[0], ref[1]));
}

// 4. Runs from criteria 1, 6 and 8.
void monotone_traces() {
  std::size_t drops = 0, points = 0;
  for (const auto& t : all_traces) {
    points += t.size();
    for (std::size_t i = 1; i < t.size(); ++i) drops += t[i] < t[i - 1] ? 1 : 0;
  }
  record(4, "HV trace non-decreasing across all acceptance runs", drops == 0 && !all_traces.empty(),
         fmt("%zu runs, %zu trace points, %zu decreases", all_traces.size(), points, drops));
}

}  // namespace

int main() {
  exact_front();
  archive_invariants();
  hypervolume_vs_monte_carlo();
  scheduler();
  determinism();
  operator_closure();
  immigration_effect();
  monotone_traces();

  bool ok = true;
  for (const auto& [id, entry] : results) {
    const auto& [title, outcome] = entry;
    std::printf("%s [%d] %s: %s\n", outcome.pass ? "PASS" : "FAIL", id, title.c_str(), outcome.detail.c_str());
    ok = ok && outcome.pass;
  }
  return ok ? 0 : 1;
}
