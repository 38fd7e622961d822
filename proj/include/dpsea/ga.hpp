#pragma once

#include <functional>
#include <span>
#include <utility>
#include <vector>

#include "dpsea/stochastics.hpp"

namespace dpsea {

struct Bounds {
  double lower = 0.0;
  double upper = 0.0;

  static Bounds of(const BenchmarkFunction& fn) { return {fn.lower_bound, fn.upper_bound}; }
  double clamp(double v) const;
};

struct Individual {
  std::vector<double> genome;
  /// Working fitness: a resampled true value or a regression estimate.
  double fitness_est = 0.0;
  /// Set while `sampled_fitness` holds a true (possibly noisy) sample for
  /// the current genome.
  bool sampled = false;
  double sampled_fitness = 0.0;
  /// Elite copied forward without re-evaluation.
  bool unchanged = false;
  /// Consecutive switching cycles spent in a cluster without evolution right.
  std::size_t idle_cycles = 0;
};

using Population = std::vector<Individual>;

/// Defaults follow the canonical GA column of the parameter table.
struct GaParams {
  std::size_t pop_size = 100;
  double p_c = 1.0;
  double p_m = 0.3;
  std::size_t n_elites = 10;
  /// Mutation variance; draws use standard deviation sqrt(sigma_m).
  double sigma_m = 0.01;

  /// Throws std::invalid_argument when an invariant is violated.
  void validate() const;
};

Individual random_individual(std::size_t dimension, const Bounds& bounds, Rng& rng);

/// Deterministic core of tournament selection: index of the minimum-fitness
/// entry among `draws`, ties to the lower population index.
std::size_t tournament_winner(std::span<const Individual> pop, std::span<const std::size_t> draws);

/// k uniform draws with replacement; returns the winner's index.
std::size_t tournament_select(std::span<const Individual> pop, std::size_t k, Rng& rng);

/// Whole-arithmetic crossover with an explicit mixing weight.
std::pair<Individual, Individual> blend(const Individual& a, const Individual& b, double alpha);

/// With probability p_c blends the parents using one alpha ~ U(0,1);
/// otherwise returns copies. Children are always marked stale.
std::pair<Individual, Individual> arithmetic_crossover(const Individual& a, const Individual& b,
                                                       double p_c, Rng& rng);

/// Per-gene additive N(0, sigma_m) with probability p_m, then clamped.
Individual gaussian_mutate(Individual ind, double p_m, double sigma_m, const Bounds& bounds,
                           Rng& rng);

using FitnessFn = std::function<double(std::span<const double>)>;

struct GenerationHooks {
  /// Mutation rate for a child given its parent's rank in the sorted
  /// population (0 = best). Unset means the constant p_m.
  std::function<double(std::size_t parent_rank)> mutation_rate;
  /// Whether values returned by the fitness callback are true samples.
  bool sampled = true;
};

/// Population ranks by fitness_est, ties to lower index.
std::vector<std::size_t> rank_order(std::span<const Individual> pop);

/// One generational step: the n_elites best are copied with unchanged=true,
/// the remaining slots are filled by binary tournament, crossover and
/// mutation, and `fitness` is called exactly once per new child.
Population evolve_generation(std::span<const Individual> pop, const FitnessFn& fitness,
                             const GaParams& params, const Bounds& bounds, Rng& rng,
                             const GenerationHooks& hooks = {});

}  // namespace dpsea
