#pragma once

// Objective-space primitives shared by every other part of the library:
// objective vectors, Pareto dominance under minimization, evaluated
// candidates, the error types and the seeded random source.

#include <compare>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mema {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A caller broke a documented precondition (length mismatch, bad reference point, ...).
struct ContractViolation : Error {
  using Error::Error;
};

/// A genotype failed the problem's validity predicate.
struct ValidityError : Error {
  using Error::Error;
};

/// Run parameters or configuration values out of range.
struct ConfigError : Error {
  using Error::Error;
};

/// The problem instance is malformed or infeasible.
struct InstanceError : Error {
  using Error::Error;
};

/// Exhaustive enumeration refused because the search space is too large.
struct OracleScopeError : Error {
  using Error::Error;
};

/// Point in objective space. All objectives are minimized. Components are
/// always finite and there is at least one of them.
class ObjectiveVector {
 public:
  ObjectiveVector() = default;
  explicit ObjectiveVector(std::vector<double> values);
  ObjectiveVector(std::initializer_list<double> values)
      : ObjectiveVector(std::vector<double>(values)) {}

  [[nodiscard]] std::size_t size() const { return values_.size(); }
  [[nodiscard]] double operator[](std::size_t i) const { return values_[i]; }
  [[nodiscard]] auto begin() const { return values_.begin(); }
  [[nodiscard]] auto end() const { return values_.end(); }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  // Lexicographic; well defined because components are never NaN.
  friend bool operator==(const ObjectiveVector&, const ObjectiveVector&) = default;
  friend std::strong_ordering operator<=>(const ObjectiveVector& a, const ObjectiveVector& b);

 private:
  std::vector<double> values_;
};

enum class Dominance { Dominates, DominatedBy, Incomparable, Equal };

const char* to_string(Dominance d);

/// Pareto relation of `a` with respect to `b` under minimization. Equality is exact.
Dominance dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// True iff `a` dominates or equals `b`.
bool weakly_dominates(const ObjectiveVector& a, const ObjectiveVector& b);

/// A genotype together with its objective vector. `key` is the problem's
/// canonical serialization of the genotype; it identifies duplicates and
/// breaks ties deterministically.
template <class Genotype>
struct Candidate {
  Genotype genotype;
  ObjectiveVector objectives;
  std::string key;
};

/// Total order used for every tie-break: objectives lexicographically, then key.
template <class G>
bool canonical_less(const Candidate<G>& a, const Candidate<G>& b) {
  if (auto c = a.objectives <=> b.objectives; c != 0) return c < 0;
  return a.key < b.key;
}

/// Seeded random source with a fixed, portable mapping from engine output to
/// draws, so seeded runs reproduce across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  /// Uniform in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform in {0, ..., n-1}; n must be positive.
  std::size_t index(std::size_t n);

  bool bernoulli(double p) { return uniform() < p; }

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) std::swap(v[i - 1], v[index(i)]);
  }

 private:
  std::mt19937_64 engine_;
};

/// What the engine needs from an optimization problem. `evaluate` must be pure.
template <class P>
concept Problem = requires(const P& p, const typename P::genotype_type& g, Rng& rng) {
  typename P::genotype_type;
  { p.objective_count() } -> std::convertible_to<std::size_t>;
  { p.evaluate(g) } -> std::same_as<ObjectiveVector>;
  { p.is_valid(g) } -> std::convertible_to<bool>;
  { p.key(g) } -> std::convertible_to<std::string>;
  { p.random_genotype(rng) } -> std::same_as<typename P::genotype_type>;
  { p.mutate(g, rng) } -> std::same_as<typename P::genotype_type>;
  { p.heavy_mutate(g, rng) } -> std::same_as<typename P::genotype_type>;
  { p.crossover(g, g, rng) } -> std::same_as<typename P::genotype_type>;
  { p.neighborhood(g) } -> std::same_as<std::vector<typename P::genotype_type>>;
};

/// Evaluates genotypes through a problem and counts every call.
/// `exhausted()` reports whether the evaluation budget has been used up; the
/// evaluator never refuses a call, callers decide how to honor the budget.
template <Problem P>
class Evaluator {
 public:
  using genotype_type = typename P::genotype_type;

  explicit Evaluator(const P& problem, std::size_t budget = static_cast<std::size_t>(-1))
      : problem_(&problem), budget_(budget) {}

  Candidate<genotype_type> operator()(genotype_type g) {
    ++count_;
    ObjectiveVector z = problem_->evaluate(g);
    std::string key = problem_->key(g);
    return {std::move(g), std::move(z), std::move(key)};
  }

  [[nodiscard]] std::size_t count() const { return count_; }
  [[nodiscard]] std::size_t budget() const { return budget_; }
  [[nodiscard]] bool exhausted() const { return count_ >= budget_; }
  [[nodiscard]] std::size_t remaining() const { return exhausted() ? 0 : budget_ - count_; }
  [[nodiscard]] const P& problem() const { return *problem_; }

 private:
  const P* problem_;
  std::size_t budget_;
  std::size_t count_ = 0;
};

}  // namespace mema
