#include "dpsea/engine.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace dpsea {

void DpseaParams::validate() const {
  ga.validate();
  if (t_switch == 0) throw std::invalid_argument("dpsea: t_switch must be >= 1");
  if (max_clusters == 0) throw std::invalid_argument("dpsea: max_clusters must be >= 1");
  if (!(radius_fraction > 0.0 && radius_fraction <= 1.0)) {
    throw std::invalid_argument("dpsea: radius_fraction must be in (0,1]");
  }
  if (!(kappa > 0.0 && kappa <= 1.0)) throw std::invalid_argument("dpsea: kappa must be in (0,1]");
  if (s_min == 0 || s_min > ga.pop_size) {
    throw std::invalid_argument("dpsea: s_min must be in [1, pop_size]");
  }
  if (staleness_limit == 0) throw std::invalid_argument("dpsea: staleness_limit must be >= 1");
  if (rs_merge == 0) throw std::invalid_argument("dpsea: rs_merge must be >= 1");
  if (!(lambda >= 0.0)) throw std::invalid_argument("dpsea: lambda must be nonnegative");
}

std::uint64_t dpsea_eval_cap(FunctionId id) {
  switch (id) {
    case FunctionId::Sphere: return 90000;
    case FunctionId::Griewank: return 430000;
    case FunctionId::RastriginF1:
    case FunctionId::Rosenbrock: return 450000;
  }
  return 0;
}

double PseudoPopulation::best_fitness() const {
  double best = std::numeric_limits<double>::infinity();
  for (const auto& m : members) best = std::min(best, m.fitness_est);
  return best;
}

namespace {

double squared_distance(std::span<const double> a, std::span<const double> b) {
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double t = a[i] - b[i];
    d += t * t;
  }
  return d;
}

std::vector<Sample> sampled_points(std::span<const Individual> members) {
  std::vector<Sample> out;
  for (const auto& m : members) {
    if (m.sampled) out.push_back({m.genome, m.sampled_fitness});
  }
  return out;
}

void fit_model(PseudoPopulation& cluster, const DpseaParams& params) {
  if (cluster.archive.empty()) {
    // No true samples: constant model over the members' working fitness.
    std::vector<Sample> fallback;
    for (const auto& m : cluster.members) fallback.push_back({m.genome, m.fitness_est});
    cluster.model = fit(fallback, ModelKind::Constant, params.lambda);
    return;
  }
  const std::size_t dim = cluster.archive.front().x.size();
  const auto kind = select_kind(cluster.archive.size(), dim, params.quadratic_factor);
  cluster.model = fit(cluster.archive, kind, params.lambda);
}

}  // namespace

std::vector<PseudoPopulation> self_organize(std::span<const Individual> pop,
                                            const BenchmarkFunction& fn,
                                            const DpseaParams& params,
                                            std::span<const Sample> recent) {
  if (pop.empty()) throw std::logic_error("self_organize: empty population");
  const double radius = params.radius_fraction * fn.domain_diagonal();
  const double radius_sq = radius * radius;
  const auto order = rank_order(pop);

  constexpr std::size_t kUnassigned = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> owner(pop.size(), kUnassigned);
  std::vector<std::size_t> seeds;

  for (std::size_t candidate : order) {
    if (seeds.size() == params.max_clusters) break;
    if (owner[candidate] != kUnassigned) continue;
    const std::size_t cluster = seeds.size();
    seeds.push_back(candidate);
    owner[candidate] = cluster;
    for (std::size_t j = 0; j < pop.size(); ++j) {
      if (owner[j] == kUnassigned &&
          squared_distance(pop[j].genome, pop[candidate].genome) <= radius_sq) {
        owner[j] = cluster;
      }
    }
  }
  // Nearest seed, ties to the lower seed index.
  auto nearest = [&](std::span<const double> x) {
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < seeds.size(); ++c) {
      const double d = squared_distance(x, pop[seeds[c]].genome);
      if (d < best_d || (d == best_d && seeds[c] < seeds[best])) {
        best = c;
        best_d = d;
      }
    }
    return best;
  };
  for (std::size_t j = 0; j < pop.size(); ++j) {
    if (owner[j] == kUnassigned) owner[j] = nearest(pop[j].genome);
  }

  std::vector<PseudoPopulation> clusters(seeds.size());
  for (std::size_t c = 0; c < seeds.size(); ++c) {
    clusters[c].seed_index = seeds[c];
    clusters[c].staleness = pop[seeds[c]].idle_cycles;
  }
  for (std::size_t j = 0; j < pop.size(); ++j) clusters[owner[j]].members.push_back(pop[j]);
  const std::size_t dim = fn.dimension;
  for (auto& cluster : clusters) {
    cluster.centroid.assign(dim, 0.0);
    for (const auto& m : cluster.members) {
      for (std::size_t i = 0; i < dim; ++i) cluster.centroid[i] += m.genome[i];
    }
    for (auto& v : cluster.centroid) v /= static_cast<double>(cluster.members.size());
    if (recent.empty()) cluster.archive = sampled_points(cluster.members);
  }
  for (const auto& sample : recent) clusters[nearest(sample.x)].archive.push_back(sample);
  return clusters;
}

void assess_eligibility(std::vector<PseudoPopulation>& clusters, const DpseaParams& params) {
  std::vector<std::size_t> order(clusters.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> best(clusters.size());
  for (std::size_t c = 0; c < clusters.size(); ++c) best[c] = clusters[c].best_fitness();
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (best[a] != best[b]) return best[a] < best[b];
    return clusters[a].seed_index < clusters[b].seed_index;
  });
  const auto top = static_cast<std::size_t>(
      std::ceil(params.kappa * static_cast<double>(clusters.size()) - 1e-12));

  for (std::size_t r = 0; r < order.size(); ++r) {
    auto& cluster = clusters[order[r]];
    cluster.eligible = r < top && cluster.members.size() >= params.s_min;
    if (cluster.eligible) {
      cluster.staleness = 0;
      fit_model(cluster, params);
    } else {
      cluster.staleness += 1;
      cluster.model.reset();
    }
    for (auto& m : cluster.members) m.idle_cycles = cluster.staleness;
  }
}

double adaptive_mutation_rate(double rank_fraction, std::size_t cluster_size,
                              const DpseaParams& params) {
  const double size = static_cast<double>(std::max<std::size_t>(cluster_size, 1));
  const double rate = params.ga.p_m * (0.5 + rank_fraction) *
                      std::sqrt(static_cast<double>(params.s_min) / size);
  return std::clamp(rate, 0.05, 1.0);
}

void evolve_pseudo(PseudoPopulation& cluster, const BenchmarkFunction& fn,
                   const DpseaParams& params, Rng& rng) {
  if (!cluster.eligible) throw std::logic_error("evolve_pseudo: cluster has no evolution right");
  if (!cluster.model) fit_model(cluster, params);
  const std::size_t size = cluster.members.size();
  if (size < 2) return;

  const Predictor estimate(*cluster.model);
  for (auto& m : cluster.members) m.fitness_est = estimate(m.genome);

  GaParams local = params.ga;
  local.pop_size = size;
  const auto scaled = static_cast<std::size_t>(std::lround(
      static_cast<double>(params.ga.n_elites) * static_cast<double>(size) /
      static_cast<double>(params.ga.pop_size)));
  local.n_elites = std::clamp<std::size_t>(scaled, 1, size - 1);

  GenerationHooks hooks;
  hooks.sampled = false;
  hooks.mutation_rate = [&](std::size_t rank) {
    const double fraction = static_cast<double>(rank) / static_cast<double>(size - 1);
    return adaptive_mutation_rate(fraction, size, params);
  };
  cluster.members = evolve_generation(cluster.members, std::cref(estimate), local, Bounds::of(fn),
                                      rng, hooks);
  for (auto& m : cluster.members) m.idle_cycles = 0;
}

namespace {

/// Indices (into the flattened merge order) of members that keep their
/// earlier true sample.
std::vector<bool> carried_elites(std::span<const PseudoPopulation> clusters,
                                 const DpseaParams& params) {
  std::vector<std::pair<double, std::size_t>> sampled;
  std::size_t flat = 0;
  for (const auto& cluster : clusters) {
    const bool replaced = cluster.staleness >= params.staleness_limit;
    for (const auto& m : cluster.members) {
      if (!replaced && m.sampled) sampled.emplace_back(m.sampled_fitness, flat);
      ++flat;
    }
  }
  std::stable_sort(sampled.begin(), sampled.end(),
                   [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<bool> keep(std::max(flat, params.ga.pop_size), false);
  const std::size_t n = std::min(params.ga.n_elites, sampled.size());
  for (std::size_t i = 0; i < n; ++i) keep[sampled[i].second] = true;
  return keep;
}

}  // namespace

std::uint64_t merge_cost(std::span<const PseudoPopulation> clusters, const DpseaParams& params) {
  const auto keep = carried_elites(clusters, params);
  const auto carried = static_cast<std::uint64_t>(std::count(keep.begin(), keep.end(), true));
  return (params.ga.pop_size - carried) * params.rs_merge;
}

Population merge_and_resample(std::vector<PseudoPopulation>& clusters, Scorer& scorer,
                              const DpseaParams& params, Rng& rng) {
  std::size_t total = 0;
  for (const auto& c : clusters) total += c.members.size();
  if (total > params.ga.pop_size) {
    throw std::logic_error("merge_and_resample: clusters hold more than pop_size members");
  }
  const BenchmarkFunction& fn = scorer.function();
  const Bounds bounds = Bounds::of(fn);
  const auto keep = carried_elites(clusters, params);
  Budget& budget = scorer.budget();

  Population pop;
  pop.reserve(params.ga.pop_size);
  for (auto& cluster : clusters) {
    const bool replaced = cluster.staleness >= params.staleness_limit;
    for (auto& m : cluster.members) {
      if (replaced) {
        pop.push_back(random_individual(fn.dimension, bounds, rng));
      } else {
        pop.push_back(std::move(m));
      }
    }
    cluster.members.clear();
  }
  while (pop.size() < params.ga.pop_size) pop.push_back(random_individual(fn.dimension, bounds, rng));

  for (std::size_t i = 0; i < pop.size(); ++i) {
    Individual& ind = pop[i];
    if (keep[i]) {
      ind.fitness_est = ind.sampled_fitness;
      ind.unchanged = true;
      budget.total_unchanged += params.rs_merge;
      continue;
    }
    ind.fitness_est = scorer.sample(ind.genome, params.rs_merge, rng);
    ind.sampled = true;
    ind.sampled_fitness = ind.fitness_est;
    ind.unchanged = false;
  }
  budget.total_it += 1;
  return pop;
}

RunResult run_dpsea(const BenchmarkFunction& fn, const NoiseModel& noise,
                    const DpseaParams& params, Rng& rng, SampleObserver observer) {
  params.validate();
  RunResult result;
  Budget& budget = result.budget;
  budget.pop_size = params.ga.pop_size;
  budget.rs = params.rs_merge;
  Scorer scorer(fn, noise, budget, std::move(observer));
  const Bounds bounds = Bounds::of(fn);
  const std::uint64_t cap = params.max_total_eval;
  const std::size_t rs = params.rs_merge;

  // Initialization is always paid for, even when it alone exceeds the cap.
  Population pop;
  pop.reserve(params.ga.pop_size);
  for (std::size_t i = 0; i < params.ga.pop_size; ++i) {
    Individual ind = random_individual(fn.dimension, bounds, rng);
    ind.fitness_est = scorer.sample(ind.genome, rs, rng);
    ind.sampled = true;
    ind.sampled_fitness = ind.fitness_est;
    pop.push_back(std::move(ind));
  }
  budget.total_it = 1;
  // True samples since the last merge; they seed the next cluster archives.
  std::vector<Sample> recent = sampled_points(pop);

  const std::uint64_t main_cost = (params.ga.pop_size - params.ga.n_elites) * rs;
  auto true_fitness = [&](std::span<const double> x) { return scorer.sample(x, rs, rng); };

  for (std::size_t cycle = 0;; ++cycle) {
    if (budget.total_eval + main_cost > cap) break;
    pop = evolve_generation(pop, true_fitness, params.ga, bounds, rng);
    budget.total_unchanged += params.ga.n_elites * rs;
    budget.total_it += 1;
    for (const auto& ind : pop) {
      if (!ind.unchanged) recent.push_back({ind.genome, ind.sampled_fitness});
    }

    auto clusters = self_organize(pop, fn, params, recent);
    assess_eligibility(clusters, params);

    const Rng cycle_rng = rng.split(cycle);
    const auto count = static_cast<std::ptrdiff_t>(clusters.size());
#pragma omp parallel for schedule(dynamic) if (params.parallel_clusters)
    for (std::ptrdiff_t c = 0; c < count; ++c) {
      auto& cluster = clusters[static_cast<std::size_t>(c)];
      if (!cluster.eligible) continue;
      Rng local = cycle_rng.split(cluster.seed_index);
      for (std::size_t g = 0; g < params.t_switch; ++g) evolve_pseudo(cluster, fn, params, local);
    }

    CycleTrace record;
    record.cycle = cycle;
    record.clusters = clusters.size();
    record.eligible = static_cast<std::size_t>(
        std::count_if(clusters.begin(), clusters.end(), [](const auto& c) { return c.eligible; }));

    if (budget.total_eval + merge_cost(clusters, params) > cap) {
      record.total_eval = budget.total_eval;
      record.best_true_fitness = scorer.best_true_fitness();
      result.trace.push_back(record);
      break;
    }
    pop = merge_and_resample(clusters, scorer, params, rng);
    recent = sampled_points(pop);
    record.total_eval = budget.total_eval;
    record.best_true_fitness = scorer.best_true_fitness();
    result.trace.push_back(record);
  }

  scorer.export_best(result);
  return result;
}

}  // namespace dpsea
