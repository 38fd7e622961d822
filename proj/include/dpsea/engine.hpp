#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "dpsea/ga.hpp"
#include "dpsea/regression.hpp"
#include "dpsea/run.hpp"

namespace dpsea {

/// Distributed population switching EA.
///
/// A single main population is periodically dissolved into pseudo-populations
/// (clusters around the best individuals). Clusters that earn the evolution
/// right evolve for `t_switch` generations on a local regression surrogate at
/// no evaluation cost; the rest are frozen. Clusters are then merged back,
/// re-scored by resampled true fitness and the main population takes one
/// canonical GA step before dissolving again.
struct DpseaParams {
  GaParams ga;
  std::size_t t_switch = 20;
  std::size_t max_clusters = 10;
  /// Cluster radius as a fraction of the search-box diagonal.
  double radius_fraction = 0.1;
  /// Fraction of clusters (ranked by best member) granted the evolution right.
  double kappa = 0.5;
  std::size_t s_min = 5;
  /// A cluster idle for this many consecutive cycles is replaced at merge.
  std::size_t staleness_limit = 2;
  std::size_t rs_merge = 1;
  std::uint64_t max_total_eval = 90000;
  double lambda = 1e-6;
  double quadratic_factor = 2.0;
  /// Evolve eligible clusters concurrently. Output is identical either way.
  bool parallel_clusters = false;

  void validate() const;
};

/// Evaluation cap used for DPSEA on each function (5-D sphere 90,000;
/// griewank 430,000; rastrigin and rosenbrock 450,000).
std::uint64_t dpsea_eval_cap(FunctionId id);

struct PseudoPopulation {
  Population members;
  /// Population index of the founding (best) member.
  std::size_t seed_index = 0;
  std::vector<double> centroid;
  bool eligible = false;
  std::size_t staleness = 0;
  std::optional<RegressionModel> model;
  /// True samples gathered since the last merge, nearest to this cluster.
  std::vector<Sample> archive;

  double best_fitness() const;
};

/// Greedy best-first clustering with a fixed radius. Clusters are returned in
/// creation order and partition `pop`. Each archive holds the `recent` samples
/// nearest to its seed, or the members' own true samples when `recent` is empty.
std::vector<PseudoPopulation> self_organize(std::span<const Individual> pop,
                                            const BenchmarkFunction& fn,
                                            const DpseaParams& params,
                                            std::span<const Sample> recent = {});

/// Grants the evolution right to clusters with at least s_min members whose
/// best fitness ranks in the top ceil(kappa * count); fits their models and
/// updates staleness counters on clusters and members.
void assess_eligibility(std::vector<PseudoPopulation>& clusters, const DpseaParams& params);

double adaptive_mutation_rate(double rank_fraction, std::size_t cluster_size,
                              const DpseaParams& params);

/// One surrogate-driven generation inside an eligible cluster. Makes no true
/// evaluations. Throws std::logic_error for a non-eligible cluster.
void evolve_pseudo(PseudoPopulation& cluster, const BenchmarkFunction& fn,
                   const DpseaParams& params, Rng& rng);

/// Rebuilds the main population: stale clusters are replaced by random
/// immigrants, shortfalls are filled randomly, the n_elites best true-sampled
/// members keep their samples and everyone else is resampled with rs_merge.
Population merge_and_resample(std::vector<PseudoPopulation>& clusters, Scorer& scorer,
                              const DpseaParams& params, Rng& rng);

/// Evaluations a merge of `clusters` would charge.
std::uint64_t merge_cost(std::span<const PseudoPopulation> clusters, const DpseaParams& params);

RunResult run_dpsea(const BenchmarkFunction& fn, const NoiseModel& noise,
                    const DpseaParams& params, Rng& rng, SampleObserver observer = {});

}  // namespace dpsea
