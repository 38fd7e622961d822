#pragma once

#include <cstdint>
#include <random>
#include <span>

#include "dpsea/benchmark.hpp"

namespace dpsea {

/// SplitMix64 finalizer. Used to derive child seeds and per-run seeds.
std::uint64_t mix64(std::uint64_t x);

/// Seeded generator. The engine is std::mt19937_64 (fully specified by the
/// standard, so a seed yields the same raw stream everywhere); normal
/// variates come from std::normal_distribution and are stable within one
/// build. One owner per instance; derive per-thread streams with split().
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t seed() const { return seed_; }

  /// Independent child stream, deterministic in (seed, label). Does not
  /// advance this generator.
  Rng split(std::uint64_t label) const;

  double uniform(double lo, double hi);
  /// Uniform integer in [0, n).
  std::size_t uniform_index(std::size_t n);
  double standard_normal();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// Evaluation accounting. For fixed-schedule runs
///   total_eval == pop_size * total_it * rs - total_unchanged.
/// total_unchanged counts skipped samples, so an elite carried over without
/// re-evaluation adds rs to it.
struct Budget {
  std::uint64_t pop_size = 0;
  std::uint64_t total_it = 0;
  std::uint64_t rs = 1;
  std::uint64_t total_unchanged = 0;
  std::uint64_t total_eval = 0;

  std::uint64_t scheduled() const { return pop_size * total_it * rs; }
  bool identity_holds() const { return scheduled() == total_eval + total_unchanged; }
};

/// One draw from N(mu, sigma^2). Always consumes exactly one standard normal
/// variate, so sigma == 0 returns mu and keeps streams aligned.
double gaussian(Rng& rng, double mu, double sigma);

/// Mean of rs independent noisy evaluations of x; charges rs to the budget.
double resampled_fitness(const BenchmarkFunction& fn, std::span<const double> x, std::size_t rs,
                         const NoiseModel& noise, Rng& rng, Budget& budget);

}  // namespace dpsea
