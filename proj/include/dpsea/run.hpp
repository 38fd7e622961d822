#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <vector>

#include "dpsea/stochastics.hpp"

namespace dpsea {

/// Called once per resampled true evaluation with the point and the number
/// of samples drawn. Lets callers count evaluations independently of Budget.
using SampleObserver = std::function<void(std::span<const double> x, std::size_t rs)>;

/// One record per switching cycle of a DPSEA run.
struct CycleTrace {
  std::size_t cycle = 0;
  std::uint64_t total_eval = 0;
  double best_true_fitness = 0.0;
  std::size_t clusters = 0;
  std::size_t eligible = 0;
};

struct RunResult {
  std::vector<double> best_genome;
  /// Noiseless fitness of the best point that received a true evaluation.
  double best_true_fitness = std::numeric_limits<double>::infinity();
  Budget budget;
  std::vector<CycleTrace> trace;
};

/// Routes every true evaluation of a run through resampled_fitness and keeps
/// the best-ever point by noiseless fitness. The noiseless score is for
/// reporting only and is not charged to the budget.
class Scorer {
 public:
  Scorer(const BenchmarkFunction& fn, const NoiseModel& noise, Budget& budget,
         SampleObserver observer = {});

  double sample(std::span<const double> x, std::size_t rs, Rng& rng);

  double best_true_fitness() const { return best_true_; }
  const std::vector<double>& best_genome() const { return best_genome_; }
  const BenchmarkFunction& function() const { return fn_; }
  Budget& budget() { return budget_; }

  /// Copies the best-ever point into `result`.
  void export_best(RunResult& result) const;

 private:
  const BenchmarkFunction& fn_;
  NoiseModel noise_;
  Budget& budget_;
  SampleObserver observer_;
  double best_true_ = std::numeric_limits<double>::infinity();
  std::vector<double> best_genome_;
};

}  // namespace dpsea
