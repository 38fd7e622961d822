#include "dpsea/baselines.hpp"

#include <stdexcept>

namespace dpsea {

std::uint64_t baseline_eval_budget(FunctionId id) {
  return id == FunctionId::Sphere ? 100000 : 500000;
}

std::uint64_t scheduled_iterations(std::uint64_t total_eval, std::size_t pop_size, std::size_t rs) {
  if (pop_size == 0 || rs == 0) return 0;
  return total_eval / (static_cast<std::uint64_t>(pop_size) * rs);
}

void CgaConfig::validate() const {
  ga.validate();
  if (rs == 0) throw std::invalid_argument("cga: rs must be >= 1");
  if (total_it() < 1) throw std::invalid_argument("cga: total_eval must be >= pop_size * rs");
}

void DeConfig::validate() const {
  if (pop_size < 4) throw std::invalid_argument("de: pop_size must be >= 4");
  if (!(cf >= 0.0 && cf <= 1.0)) throw std::invalid_argument("de: CF must be in [0,1]");
  if (rs == 0) throw std::invalid_argument("de: rs must be >= 1");
  if (total_it() < 1) throw std::invalid_argument("de: total_eval must be >= pop_size * rs");
}

void PsoConfig::validate() const {
  if (pop_size == 0) throw std::invalid_argument("pso: pop_size must be positive");
  if (w_end > w_start) throw std::invalid_argument("pso: w_end must be <= w_start");
  if (phi_min > phi_max) throw std::invalid_argument("pso: phi_min must be <= phi_max");
  if (rs == 0) throw std::invalid_argument("pso: rs must be >= 1");
  if (total_it() < 1) throw std::invalid_argument("pso: total_eval must be >= pop_size * rs");
}

namespace {

RunResult start(std::size_t pop_size, std::size_t rs) {
  RunResult result;
  result.budget.pop_size = pop_size;
  result.budget.rs = rs;
  return result;
}

}  // namespace

RunResult run_cga(const BenchmarkFunction& fn, const NoiseModel& noise, const CgaConfig& cfg,
                  Rng& rng, SampleObserver observer) {
  cfg.validate();
  RunResult result = start(cfg.ga.pop_size, cfg.rs);
  Budget& budget = result.budget;
  Scorer scorer(fn, noise, budget, std::move(observer));
  const Bounds bounds = Bounds::of(fn);
  auto sample = [&](std::span<const double> x) { return scorer.sample(x, cfg.rs, rng); };

  Population pop;
  pop.reserve(cfg.ga.pop_size);
  for (std::size_t i = 0; i < cfg.ga.pop_size; ++i) {
    Individual ind = random_individual(fn.dimension, bounds, rng);
    ind.fitness_est = sample(ind.genome);
    ind.sampled = true;
    ind.sampled_fitness = ind.fitness_est;
    pop.push_back(std::move(ind));
  }
  budget.total_it = 1;

  const std::uint64_t iterations = cfg.total_it();
  for (std::uint64_t it = 1; it < iterations; ++it) {
    pop = evolve_generation(pop, sample, cfg.ga, bounds, rng);
    budget.total_unchanged += cfg.ga.n_elites * cfg.rs;
    budget.total_it += 1;
  }
  scorer.export_best(result);
  return result;
}

std::vector<double> de_trial(std::span<const double> target, std::span<const double> x_r1,
                             std::span<const double> x_r2, std::span<const double> x_r3,
                             double f_scale, double cf, std::span<const double> u,
                             std::size_t jrand, const Bounds& bounds) {
  std::vector<double> trial(target.begin(), target.end());
  for (std::size_t j = 0; j < trial.size(); ++j) {
    if (u[j] < cf || j == jrand) {
      trial[j] = bounds.clamp(x_r1[j] + f_scale * (x_r2[j] - x_r3[j]));
    }
  }
  return trial;
}

RunResult run_de(const BenchmarkFunction& fn, const NoiseModel& noise, const DeConfig& cfg,
                 Rng& rng, SampleObserver observer) {
  cfg.validate();
  RunResult result = start(cfg.pop_size, cfg.rs);
  Budget& budget = result.budget;
  Scorer scorer(fn, noise, budget, std::move(observer));
  const Bounds bounds = Bounds::of(fn);
  const std::size_t n = cfg.pop_size;
  const std::size_t dim = fn.dimension;

  std::vector<std::vector<double>> xs(n);
  std::vector<double> fs(n);
  for (std::size_t i = 0; i < n; ++i) {
    xs[i] = random_individual(dim, bounds, rng).genome;
    fs[i] = scorer.sample(xs[i], cfg.rs, rng);
  }
  budget.total_it = 1;

  std::vector<double> u(dim);
  const std::uint64_t iterations = cfg.total_it();
  for (std::uint64_t it = 1; it < iterations; ++it) {
    auto next_x = xs;
    auto next_f = fs;
    for (std::size_t i = 0; i < n; ++i) {
      std::size_t r1, r2, r3;
      do { r1 = rng.uniform_index(n); } while (r1 == i);
      do { r2 = rng.uniform_index(n); } while (r2 == i || r2 == r1);
      do { r3 = rng.uniform_index(n); } while (r3 == i || r3 == r1 || r3 == r2);
      for (auto& v : u) v = rng.uniform(0.0, 1.0);
      const std::size_t jrand = rng.uniform_index(dim);
      auto trial = de_trial(xs[i], xs[r1], xs[r2], xs[r3], cfg.f_scale, cfg.cf, u, jrand, bounds);
      const double f = scorer.sample(trial, cfg.rs, rng);
      if (f <= fs[i]) {
        next_x[i] = std::move(trial);
        next_f[i] = f;
      }
    }
    xs = std::move(next_x);
    fs = std::move(next_f);
    budget.total_it += 1;
  }
  scorer.export_best(result);
  return result;
}

double inertia_weight(std::size_t step, std::size_t steps, const PsoConfig& cfg) {
  if (steps <= 1) return cfg.w_start;
  const double t = static_cast<double>(step) / static_cast<double>(steps - 1);
  return cfg.w_start + (cfg.w_end - cfg.w_start) * t;
}

void pso_move(Particle& p, std::span<const double> global_best, double w,
              std::span<const double> phi1, std::span<const double> phi2, const Bounds& bounds) {
  for (std::size_t j = 0; j < p.position.size(); ++j) {
    const double x = p.position[j];
    p.velocity[j] = w * p.velocity[j] + phi1[j] * (p.best_position[j] - x) +
                    phi2[j] * (global_best[j] - x);
    p.position[j] = bounds.clamp(x + p.velocity[j]);
  }
}

RunResult run_pso(const BenchmarkFunction& fn, const NoiseModel& noise, const PsoConfig& cfg,
                  Rng& rng, SampleObserver observer) {
  cfg.validate();
  RunResult result = start(cfg.pop_size, cfg.rs);
  Budget& budget = result.budget;
  Scorer scorer(fn, noise, budget, std::move(observer));
  const Bounds bounds = Bounds::of(fn);
  const std::size_t dim = fn.dimension;

  std::vector<Particle> swarm(cfg.pop_size);
  std::size_t leader = 0;
  for (std::size_t i = 0; i < swarm.size(); ++i) {
    auto& p = swarm[i];
    p.position = random_individual(dim, bounds, rng).genome;
    p.velocity.assign(dim, 0.0);
    p.best_position = p.position;
    p.best_fitness = scorer.sample(p.position, cfg.rs, rng);
    if (p.best_fitness < swarm[leader].best_fitness) leader = i;
  }
  budget.total_it = 1;
  std::vector<double> global_best = swarm[leader].best_position;

  const std::size_t steps = static_cast<std::size_t>(cfg.total_it() - 1);
  std::vector<double> phi1(dim), phi2(dim);
  for (std::size_t step = 0; step < steps; ++step) {
    const double w = inertia_weight(step, steps, cfg);
    for (auto& p : swarm) {
      for (std::size_t j = 0; j < dim; ++j) {
        phi1[j] = rng.uniform(cfg.phi_min, cfg.phi_max);
        phi2[j] = rng.uniform(cfg.phi_min, cfg.phi_max);
      }
      pso_move(p, global_best, w, phi1, phi2, bounds);
      const double f = scorer.sample(p.position, cfg.rs, rng);
      if (f < p.best_fitness) {
        p.best_fitness = f;
        p.best_position = p.position;
      }
    }
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      if (swarm[i].best_fitness < swarm[leader].best_fitness) leader = i;
    }
    global_best = swarm[leader].best_position;
    budget.total_it += 1;
  }
  scorer.export_best(result);
  return result;
}

}  // namespace dpsea
