#include "dpsea/run.hpp"

namespace dpsea {

Scorer::Scorer(const BenchmarkFunction& fn, const NoiseModel& noise, Budget& budget,
               SampleObserver observer)
    : fn_(fn), noise_(noise), budget_(budget), observer_(std::move(observer)) {}

double Scorer::sample(std::span<const double> x, std::size_t rs, Rng& rng) {
  const double value = resampled_fitness(fn_, x, rs, noise_, rng, budget_);
  if (observer_) observer_(x, rs);
  const double truth = evaluate(fn_, x);
  if (truth < best_true_) {
    best_true_ = truth;
    best_genome_.assign(x.begin(), x.end());
  }
  return value;
}

void Scorer::export_best(RunResult& result) const {
  result.best_true_fitness = best_true_;
  result.best_genome = best_genome_;
}

}  // namespace dpsea
