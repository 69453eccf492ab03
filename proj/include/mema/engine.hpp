#pragma once

// The memetic main loop.
//
//   P := initialize();  A := Reduce(Nondom(P))
//   while evaluations < budget:
//     while not stagnant and evaluations < budget:
//       S := SelectFrom(P ∪ A)       SEL pool
//       S := Vary(S)                 VAR pool
//       S := LocalSearch(S)          LS pool
//       P := Replace(P ∪ S)          REP pool
//       A := Reduce(Nondom(A ∪ S))   RED pool
//     P := RandomImmigrants(P)       IMM pool
//   return A
//
// Random draw order, fixed for reproducibility (one Rng seeded from
// RunParams::seed):
//   initialize      per member: the problem's random_genotype draws
//   per iteration   SEL choose; per parent: tournament 2 index draws or
//                   uniform 1 index draw; VAR choose; per offspring:
//                   mutation = 1 bernoulli then the problem's mutate draws,
//                   crossover = the problem's crossover draws; LS choose;
//                   per offspring: Chebyshev = one uniform per objective;
//                   REP choose; RED choose
//   immigration     IMM choose; per immigrant: fresh = random_genotype
//                   draws, archive = 1 index draw then heavy_mutate draws
//
// Operator credit (one outcome per pool per use):
//   SEL, VAR, LS  some offspring of the iteration was accepted into A
//   REP           the fraction of P not dominated by A rose
//   RED           HV(A) did not fall over the iteration
//   IMM           HV(A) rose over the first iteration after immigration

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "mema/archive.hpp"
#include "mema/core.hpp"
#include "mema/measures.hpp"
#include "mema/ranking.hpp"
#include "mema/scheduler.hpp"

namespace mema {

enum class SelectionOp : std::size_t { BinaryTournament, Uniform };
enum class VariationOp : std::size_t { Mutation, Crossover };
enum class LocalSearchOp : std::size_t { Chebyshev, ParetoStep };
enum class ReplacementOp : std::size_t { Elitist, GenerationalElite };
enum class ImmigrationOp : std::size_t { FreshRandom, ArchiveMutation };

struct RunParams {
  std::size_t population_size = 50;
  std::size_t offspring_count = 50;
  std::size_t archive_capacity = 100;
  std::size_t budget = 100'000;
  std::size_t stagnation_window = 10;
  double stagnation_tolerance = 1e-9;  // relative to the current hypervolume
  double immigrant_fraction = 0.3;
  std::uint64_t seed = 1;
  std::size_t scheduler_window = OperatorPool::kDefaultWindow;
  double probability_floor = OperatorPool::kDefaultFloor;
  std::size_t ls_moves = 20;  // neighbor evaluations per individual
  double mutation_probability = 1.0;

  /// Throws ConfigError naming the first out-of-range field.
  void validate() const;

  friend bool operator==(const RunParams&, const RunParams&) = default;
};

template <class G>
using Population = std::vector<Candidate<G>>;

/// One pool per pipeline stage, with the operator names the engine uses.
struct SchedulerSet {
  OperatorPool selection, variation, local_search, replacement, reduction, immigration;

  explicit SchedulerSet(std::size_t window = OperatorPool::kDefaultWindow,
                        double floor = OperatorPool::kDefaultFloor);

  [[nodiscard]] std::vector<const OperatorPool*> all() const {
    return {&selection, &variation, &local_search, &replacement, &reduction, &immigration};
  }
};

template <class G>
struct RunResult {
  NondominatedArchive<G> archive;
  std::size_t evaluations = 0;
  ObjectiveVector reference;
  std::vector<double> hv_trace;  // after initialization, then after every inner iteration
  std::size_t outer_iterations = 0;
  std::size_t inner_iterations = 0;
  std::size_t immigrations = 0;
  SchedulerSet schedulers;
  double wall_clock_seconds = 0.0;
};

/// Scalarization frame for the Chebyshev local search.
struct Normalization {
  std::vector<double> ideal;
  std::vector<double> scale;

  /// ideal 0, scale 1.
  static Normalization identity(std::size_t objectives) {
    return {std::vector<double>(objectives, 0.0), std::vector<double>(objectives, 1.0)};
  }
};

/// True iff the last `window` consecutive deltas of `trace` are each below `tolerance`.
/// A trace with fewer than window + 1 values is never stagnant.
bool stagnation(std::span<const double> trace, std::size_t window, double tolerance);

/// ceil(fraction * population), capped so one member always survives.
std::size_t immigrant_count(double fraction, std::size_t population);

// --- pipeline stages ------------------------------------------------------

template <Problem P>
Population<typename P::genotype_type> initialize(const P& problem, std::size_t size, Rng& rng,
                                                 Evaluator<P>& eval) {
  constexpr int kAttempts = 1000;
  Population<typename P::genotype_type> pop;
  pop.reserve(size);
  for (std::size_t i = 0; i < size; ++i) {
    bool done = false;
    for (int attempt = 0; attempt < kAttempts && !done; ++attempt) {
      try {
        auto g = problem.random_genotype(rng);
        if (!problem.is_valid(g)) continue;
        pop.push_back(eval(std::move(g)));
        done = true;
      } catch (const InstanceError&) {
        // retried below
      }
    }
    if (!done) {
      throw InstanceError("problem produced no valid genotype in " + std::to_string(kAttempts) +
                          " attempts");
    }
  }
  return pop;
}

/// Draws `count` parents from pop ∪ archive.
template <class G>
Population<G> select_from(const Population<G>& pop, const NondominatedArchive<G>& archive,
                          SelectionOp op, std::size_t count, Rng& rng) {
  Population<G> pool = pop;
  pool.insert(pool.end(), archive.members().begin(), archive.members().end());
  if (pool.empty()) throw ContractViolation("selection from an empty population");

  Population<G> parents;
  parents.reserve(count);
  if (op == SelectionOp::Uniform) {
    for (std::size_t i = 0; i < count; ++i) parents.push_back(pool[rng.index(pool.size())]);
    return parents;
  }
  const std::span<const Candidate<G>> view(pool);
  const auto tie = canonical_positions(view);
  const auto points = objectives_of(view);
  const auto info = rank_and_crowding(points, tie);
  auto better = [&](std::size_t a, std::size_t b) {
    if (info.rank[a] != info.rank[b]) return info.rank[a] < info.rank[b];
    if (info.crowding[a] != info.crowding[b]) return info.crowding[a] > info.crowding[b];
    return tie[a] < tie[b];
  };
  for (std::size_t i = 0; i < count; ++i) {
    const std::size_t a = rng.index(pool.size());
    const std::size_t b = rng.index(pool.size());
    parents.push_back(pool[better(b, a) ? b : a]);
  }
  return parents;
}

/// One offspring per parent: mutation of parent i (with `mutation_probability`),
/// or crossover of parents i and i+1 (cyclically).
template <Problem P>
Population<typename P::genotype_type> vary(const Population<typename P::genotype_type>& parents,
                                           const P& problem, VariationOp op,
                                           double mutation_probability, Rng& rng,
                                           Evaluator<P>& eval) {
  Population<typename P::genotype_type> offspring;
  offspring.reserve(parents.size());
  for (std::size_t i = 0; i < parents.size(); ++i) {
    const auto& g = parents[i].genotype;
    if (op == VariationOp::Mutation) {
      offspring.push_back(eval(rng.bernoulli(mutation_probability) ? problem.mutate(g, rng) : g));
    } else {
      const auto& mate = parents[(i + 1) % parents.size()].genotype;
      offspring.push_back(eval(problem.crossover(g, mate, rng)));
    }
  }
  return offspring;
}

namespace detail {

inline double chebyshev(const ObjectiveVector& z, std::span<const double> weight,
                        const Normalization& norm) {
  double g = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < z.size(); ++i) {
    g = std::max(g, weight[i] * (z[i] - norm.ideal[i]) / norm.scale[i]);
  }
  return g;
}

}  // namespace detail

/// Improves each offspring with at most `moves` neighbor evaluations (and
/// never past the evaluator's budget). Chebyshev: first-improvement descent
/// on a weighted Chebyshev scalarization with a random weight per
/// individual. ParetoStep: move to the first neighbor dominating the current
/// point, repeatedly. Either way the result is never dominated by its start.
template <Problem P>
Population<typename P::genotype_type> local_search(Population<typename P::genotype_type> offspring,
                                                   const P& problem, LocalSearchOp op,
                                                   std::size_t moves, const Normalization& norm,
                                                   Rng& rng, Evaluator<P>& eval) {
  for (auto& current : offspring) {
    std::vector<double> weight;
    if (op == LocalSearchOp::Chebyshev) {
      weight.resize(current.objectives.size());
      double total = 0.0;
      for (double& w : weight) total += (w = -std::log(1.0 - rng.uniform()));
      for (double& w : weight) w = total > 0.0 ? w / total : 1.0 / static_cast<double>(weight.size());
    }
    auto improves = [&](const ObjectiveVector& candidate) {
      if (op == LocalSearchOp::ParetoStep) {
        return dominates(candidate, current.objectives) == Dominance::Dominates;
      }
      return detail::chebyshev(candidate, weight, norm) <
             detail::chebyshev(current.objectives, weight, norm);
    };

    std::size_t spent = 0;
    bool moved = true;
    while (moved && spent < moves && !eval.exhausted()) {
      moved = false;
      for (auto& g : problem.neighborhood(current.genotype)) {
        if (spent >= moves || eval.exhausted()) break;
        ++spent;
        auto next = eval(std::move(g));
        if (improves(next.objectives)) {
          current = std::move(next);
          moved = true;
          break;
        }
      }
    }
  }
  return offspring;
}

/// Survival selection over pop ∪ offspring, keeping `size` members in union order.
template <class G>
Population<G> replace(const Population<G>& pop, const Population<G>& offspring, ReplacementOp op,
                      std::size_t size) {
  Population<G> all = pop;
  all.insert(all.end(), offspring.begin(), offspring.end());
  if (all.size() < size) throw ContractViolation("replacement union smaller than population");
  const std::span<const Candidate<G>> view(all);
  const auto tie = canonical_positions(view);
  const auto points = objectives_of(view);

  std::vector<std::size_t> kept;
  if (op == ReplacementOp::Elitist) {
    kept = elitist_select(points, size, tie);
  } else {
    // Offspring first, topped up with the best of the old population, and
    // the best member of the union always kept.
    const std::size_t from_offspring = std::min(size, offspring.size());
    for (std::size_t i = 0; i < from_offspring; ++i) kept.push_back(pop.size() + i);
    if (kept.size() < size) {
      const std::span<const Candidate<G>> old(pop);
      const auto old_tie = canonical_positions(old);
      const auto old_order = elitist_order(rank_and_crowding(objectives_of(old), old_tie), old_tie);
      for (std::size_t i = 0; kept.size() < size; ++i) kept.push_back(old_order[i]);
    }
    const auto order = elitist_order(rank_and_crowding(points, tie), tie);
    const std::size_t best = order.front();
    if (std::find(kept.begin(), kept.end(), best) == kept.end()) {
      std::size_t worst_pos = 0;
      std::vector<std::size_t> position(all.size());
      for (std::size_t k = 0; k < order.size(); ++k) position[order[k]] = k;
      for (std::size_t k = 1; k < kept.size(); ++k) {
        if (position[kept[k]] > position[kept[worst_pos]]) worst_pos = k;
      }
      kept[worst_pos] = best;
    }
    std::sort(kept.begin(), kept.end());
  }
  Population<G> survivors;
  survivors.reserve(size);
  for (std::size_t i : kept) survivors.push_back(all[i]);
  return survivors;
}

/// Replaces the `count` worst-ranked members of `pop` in place, by fresh
/// random genotypes or heavy mutations of uniformly drawn archive members.
template <Problem P>
Population<typename P::genotype_type> random_immigrants(
    Population<typename P::genotype_type> pop,
    const NondominatedArchive<typename P::genotype_type>& archive, const P& problem,
    ImmigrationOp op, std::size_t count, Rng& rng, Evaluator<P>& eval) {
  using G = typename P::genotype_type;
  count = std::min(count, pop.size() > 0 ? pop.size() - 1 : 0);
  if (count == 0) return pop;
  const std::span<const Candidate<G>> view(pop);
  const auto tie = canonical_positions(view);
  const auto order = elitist_order(rank_and_crowding(objectives_of(view), tie), tie);
  std::vector<std::size_t> slots(order.end() - static_cast<std::ptrdiff_t>(count), order.end());
  std::sort(slots.begin(), slots.end());
  for (std::size_t slot : slots) {
    if (op == ImmigrationOp::ArchiveMutation && !archive.empty()) {
      const auto& source = archive.members()[rng.index(archive.size())];
      pop[slot] = eval(problem.heavy_mutate(source.genotype, rng));
    } else {
      // initialize's retry contract also covers single immigrants
      pop[slot] = std::move(initialize(problem, 1, rng, eval).front());
    }
  }
  return pop;
}

// --- the run loop ---------------------------------------------------------

namespace detail {

template <class G>
double archive_hv(const NondominatedArchive<G>& archive, const ObjectiveVector& ref) {
  return bounded_hypervolume(archive.objective_vectors(), ref);
}

template <class G>
double undominated_fraction(const Population<G>& pop, const NondominatedArchive<G>& archive) {
  if (pop.empty()) return 0.0;
  std::size_t free = 0;
  for (const auto& c : pop) free += archive.dominated(c.objectives) ? 0 : 1;
  return static_cast<double>(free) / static_cast<double>(pop.size());
}

template <class G>
Normalization normalization_from(const NondominatedArchive<G>& archive, const ObjectiveVector& ref) {
  const std::size_t n = ref.size();
  Normalization norm{std::vector<double>(n, std::numeric_limits<double>::infinity()),
                     std::vector<double>(n, 1.0)};
  for (const auto& m : archive.members()) {
    for (std::size_t i = 0; i < n; ++i) norm.ideal[i] = std::min(norm.ideal[i], m.objectives[i]);
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(norm.ideal[i])) norm.ideal[i] = 0.0;
    const double span = ref[i] - norm.ideal[i];
    norm.scale[i] = span > 0.0 ? span : 1.0;
  }
  return norm;
}

}  // namespace detail

/// Runs the full loop. The evaluation count ends at most
/// max(budget, population_size) + offspring_count.
template <Problem P>
RunResult<typename P::genotype_type> run(const P& problem, const RunParams& params) {
  using G = typename P::genotype_type;
  params.validate();
  const auto started = std::chrono::steady_clock::now();

  Rng rng(params.seed);
  Evaluator<P> eval(problem, params.budget);
  RunResult<G> result{NondominatedArchive<G>(params.archive_capacity), 0, {}, {}, 0, 0, 0,
                      SchedulerSet(params.scheduler_window, params.probability_floor), 0.0};
  SchedulerSet& pools = result.schedulers;
  auto& archive = result.archive;

  Population<G> pop = initialize(problem, params.population_size, rng, eval);
  for (const auto& c : pop) archive.merge(c);
  archive.reduce();
  {
    const auto initial = objectives_of(std::span<const Candidate<G>>(pop));
    result.reference = reference_point(initial);
  }
  const ObjectiveVector& ref = result.reference;
  double hv = detail::archive_hv(archive, ref);
  result.hv_trace.push_back(hv);

  const std::size_t n_immigrants = immigrant_count(params.immigrant_fraction, params.population_size);
  std::size_t pending_imm_op = 0;
  double hv_at_immigration = 0.0;
  bool imm_pending = false;

  while (!eval.exhausted()) {
    ++result.outer_iterations;
    std::vector<double> pass_trace{hv};
    while (!eval.exhausted() &&
           !stagnation(pass_trace, params.stagnation_window, params.stagnation_tolerance * hv)) {
      ++result.inner_iterations;
      const double hv_before = hv;

      const auto sel = pools.selection.choose(rng);
      auto offspring = select_from(pop, archive, static_cast<SelectionOp>(sel),
                                   params.offspring_count, rng);
      const auto var = pools.variation.choose(rng);
      offspring = vary(offspring, problem, static_cast<VariationOp>(var),
                       params.mutation_probability, rng, eval);
      const auto ls = pools.local_search.choose(rng);
      offspring = local_search(std::move(offspring), problem, static_cast<LocalSearchOp>(ls),
                               params.ls_moves, detail::normalization_from(archive, ref), rng, eval);
      const auto rep = pools.replacement.choose(rng);
      Population<G> next = replace(pop, offspring, static_cast<ReplacementOp>(rep),
                                   params.population_size);
      const auto red = pools.reduction.choose(rng);
      std::size_t accepted = 0;
      for (auto& c : offspring) accepted += archive.merge(std::move(c)) ? 1 : 0;
      archive.reduce(static_cast<ReductionPolicy>(red));
      hv = detail::archive_hv(archive, ref);

      const bool progress = accepted > 0;
      pools.selection.report(sel, progress);
      pools.variation.report(var, progress);
      pools.local_search.report(ls, progress);
      pools.replacement.report(rep, detail::undominated_fraction(next, archive) >
                                        detail::undominated_fraction(pop, archive));
      pools.reduction.report(red, hv >= hv_before);
      if (imm_pending) {
        pools.immigration.report(pending_imm_op, hv > hv_at_immigration);
        imm_pending = false;
      }

      pop = std::move(next);
      pass_trace.push_back(hv);
      result.hv_trace.push_back(hv);
    }

    // Immigration only when it fits in the remaining budget; otherwise the
    // next pass simply starts with a fresh stagnation window.
    if (n_immigrants > 0 && eval.remaining() >= n_immigrants) {
      const auto imm = pools.immigration.choose(rng);
      pop = random_immigrants(std::move(pop), archive, problem, static_cast<ImmigrationOp>(imm),
                              n_immigrants, rng, eval);
      ++result.immigrations;
      pending_imm_op = imm;
      hv_at_immigration = hv;
      imm_pending = true;
    }
  }

  result.evaluations = eval.count();
  result.wall_clock_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return result;
}

}  // namespace mema
