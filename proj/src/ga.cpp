#include "dpsea/ga.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace dpsea {

double Bounds::clamp(double v) const { return std::clamp(v, lower, upper); }

void GaParams::validate() const {
  if (pop_size == 0) throw std::invalid_argument("ga: pop_size must be positive");
  if (n_elites >= pop_size) throw std::invalid_argument("ga: n_elites must be < pop_size");
  if (!(p_c >= 0.0 && p_c <= 1.0)) throw std::invalid_argument("ga: p_c must be in [0,1]");
  if (!(p_m >= 0.0 && p_m <= 1.0)) throw std::invalid_argument("ga: p_m must be in [0,1]");
  if (!(sigma_m >= 0.0)) throw std::invalid_argument("ga: sigma_m must be nonnegative");
}

Individual random_individual(std::size_t dimension, const Bounds& bounds, Rng& rng) {
  Individual ind;
  ind.genome.resize(dimension);
  for (auto& g : ind.genome) g = rng.uniform(bounds.lower, bounds.upper);
  return ind;
}

std::size_t tournament_winner(std::span<const Individual> pop, std::span<const std::size_t> draws) {
  if (pop.empty()) throw std::logic_error("tournament on empty population");
  if (draws.empty()) throw std::invalid_argument("tournament needs at least one draw");
  std::size_t best = draws.front();
  for (std::size_t idx : draws.subspan(1)) {
    const double f = pop[idx].fitness_est;
    const double fb = pop[best].fitness_est;
    if (f < fb || (f == fb && idx < best)) best = idx;
  }
  return best;
}

std::size_t tournament_select(std::span<const Individual> pop, std::size_t k, Rng& rng) {
  if (pop.empty()) throw std::logic_error("tournament on empty population");
  if (k == 0) throw std::invalid_argument("tournament size must be >= 1");
  std::vector<std::size_t> draws(k);
  for (auto& d : draws) d = rng.uniform_index(pop.size());
  return tournament_winner(pop, draws);
}

namespace {

Individual stale_copy(const Individual& src) {
  Individual out;
  out.genome = src.genome;
  out.fitness_est = src.fitness_est;
  return out;
}

}  // namespace

std::pair<Individual, Individual> blend(const Individual& a, const Individual& b, double alpha) {
  if (a.genome.size() != b.genome.size()) {
    throw std::invalid_argument("crossover: genome length mismatch");
  }
  Individual c1 = stale_copy(a);
  Individual c2 = stale_copy(b);
  for (std::size_t i = 0; i < a.genome.size(); ++i) {
    const double x = a.genome[i];
    const double y = b.genome[i];
    // alpha*x + (1-alpha)*y, written so that x == y reproduces x exactly.
    c1.genome[i] = y + alpha * (x - y);
    c2.genome[i] = x + alpha * (y - x);
  }
  return {std::move(c1), std::move(c2)};
}

std::pair<Individual, Individual> arithmetic_crossover(const Individual& a, const Individual& b,
                                                       double p_c, Rng& rng) {
  if (a.genome.size() != b.genome.size()) {
    throw std::invalid_argument("crossover: genome length mismatch");
  }
  // Both draws happen unconditionally so the stream does not depend on p_c.
  const double u = rng.uniform(0.0, 1.0);
  const double alpha = rng.uniform(0.0, 1.0);
  if (u < p_c) return blend(a, b, alpha);
  return {stale_copy(a), stale_copy(b)};
}

Individual gaussian_mutate(Individual ind, double p_m, double sigma_m, const Bounds& bounds,
                           Rng& rng) {
  if (!(sigma_m >= 0.0)) throw std::invalid_argument("mutate: sigma_m must be nonnegative");
  const double sd = std::sqrt(sigma_m);
  auto& genes = ind.genome;
  if (p_m >= 1.0) {
    for (auto& g : genes) g = bounds.clamp(g + sd * rng.standard_normal());
  } else if (p_m > 0.0) {
    // Gaps between mutated genes are geometric, which matches an independent
    // Bernoulli(p_m) trial per gene with one draw per mutation.
    std::geometric_distribution<std::size_t> gap(p_m);
    for (std::size_t i = gap(rng.engine()); i < genes.size(); i += 1 + gap(rng.engine())) {
      genes[i] = bounds.clamp(genes[i] + sd * rng.standard_normal());
    }
  }
  ind.sampled = false;
  ind.unchanged = false;
  return ind;
}

std::vector<std::size_t> rank_order(std::span<const Individual> pop) {
  std::vector<std::size_t> order(pop.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return pop[a].fitness_est < pop[b].fitness_est;
  });
  return order;
}

Population evolve_generation(std::span<const Individual> pop, const FitnessFn& fitness,
                             const GaParams& params, const Bounds& bounds, Rng& rng,
                             const GenerationHooks& hooks) {
  params.validate();
  if (pop.size() != params.pop_size) {
    throw std::invalid_argument("evolve_generation: population size does not match pop_size");
  }
  const auto order = rank_order(pop);
  std::vector<std::size_t> rank_of(pop.size());
  for (std::size_t r = 0; r < order.size(); ++r) rank_of[order[r]] = r;

  Population next;
  next.reserve(params.pop_size);
  for (std::size_t e = 0; e < params.n_elites; ++e) {
    Individual elite = pop[order[e]];
    elite.unchanged = true;
    next.push_back(std::move(elite));
  }

  auto rate_for = [&](std::size_t parent) {
    return hooks.mutation_rate ? hooks.mutation_rate(rank_of[parent]) : params.p_m;
  };
  auto finish = [&](Individual child) {
    child.fitness_est = fitness(child.genome);
    child.sampled = hooks.sampled;
    child.sampled_fitness = hooks.sampled ? child.fitness_est : 0.0;
    child.unchanged = false;
    next.push_back(std::move(child));
  };

  while (next.size() < params.pop_size) {
    const std::size_t pa = tournament_select(pop, 2, rng);
    const std::size_t pb = tournament_select(pop, 2, rng);
    auto [c1, c2] = arithmetic_crossover(pop[pa], pop[pb], params.p_c, rng);
    finish(gaussian_mutate(std::move(c1), rate_for(pa), params.sigma_m, bounds, rng));
    if (next.size() < params.pop_size) {
      finish(gaussian_mutate(std::move(c2), rate_for(pb), params.sigma_m, bounds, rng));
    }
  }
  return next;
}

}  // namespace dpsea
