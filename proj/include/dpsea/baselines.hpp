#pragma once

#include <cstdint>

#include "dpsea/ga.hpp"
#include "dpsea/run.hpp"

namespace dpsea {

// Fixed-budget baselines. Each run performs total_it = floor(total_eval /
// (pop_size * rs)) evaluation rounds (the initial population counts as the
// first), so total_it shrinks as rs grows.

/// Evaluation budget used for the baselines on each function (100,000 for the
/// 5-D sphere, 500,000 otherwise).
std::uint64_t baseline_eval_budget(FunctionId id);

std::uint64_t scheduled_iterations(std::uint64_t total_eval, std::size_t pop_size, std::size_t rs);

struct CgaConfig {
  GaParams ga;
  std::size_t rs = 1;
  std::uint64_t total_eval = 100000;

  std::uint64_t total_it() const { return scheduled_iterations(total_eval, ga.pop_size, rs); }
  void validate() const;
};

struct DeConfig {
  std::size_t pop_size = 50;
  /// Binomial crossover rate.
  double cf = 0.8;
  double f_scale = 0.5;
  std::size_t rs = 1;
  std::uint64_t total_eval = 100000;

  std::uint64_t total_it() const { return scheduled_iterations(total_eval, pop_size, rs); }
  void validate() const;
};

struct PsoConfig {
  std::size_t pop_size = 20;
  double w_start = 1.0;
  double w_end = 0.7;
  double phi_min = 0.0;
  double phi_max = 2.0;
  std::size_t rs = 1;
  std::uint64_t total_eval = 100000;

  std::uint64_t total_it() const { return scheduled_iterations(total_eval, pop_size, rs); }
  void validate() const;
};

/// Generational GA: elites are carried without re-evaluation.
RunResult run_cga(const BenchmarkFunction& fn, const NoiseModel& noise, const CgaConfig& cfg,
                  Rng& rng, SampleObserver observer = {});

/// DE/rand/1/bin trial vector for target i given donors r1, r2, r3 and the
/// crossover draws (`u[j]` uniform in [0,1), forced gene index `jrand`).
std::vector<double> de_trial(std::span<const double> target, std::span<const double> x_r1,
                             std::span<const double> x_r2, std::span<const double> x_r3,
                             double f_scale, double cf, std::span<const double> u,
                             std::size_t jrand, const Bounds& bounds);

RunResult run_de(const BenchmarkFunction& fn, const NoiseModel& noise, const DeConfig& cfg,
                 Rng& rng, SampleObserver observer = {});

/// Inertia weight at update step `step` of `steps`, linear from w_start to
/// w_end inclusive.
double inertia_weight(std::size_t step, std::size_t steps, const PsoConfig& cfg);

struct Particle {
  std::vector<double> position;
  std::vector<double> velocity;
  std::vector<double> best_position;
  double best_fitness = 0.0;
};

/// Velocity and position update for one particle with explicit per-dimension
/// weights phi1, phi2.
void pso_move(Particle& p, std::span<const double> global_best, double w,
              std::span<const double> phi1, std::span<const double> phi2, const Bounds& bounds);

RunResult run_pso(const BenchmarkFunction& fn, const NoiseModel& noise, const PsoConfig& cfg,
                  Rng& rng, SampleObserver observer = {});

}  // namespace dpsea
