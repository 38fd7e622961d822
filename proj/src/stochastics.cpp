#include "dpsea/stochastics.hpp"

#include <stdexcept>

namespace dpsea {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed) : seed_(seed), engine_(mix64(seed)) {}

Rng Rng::split(std::uint64_t label) const {
  return Rng(mix64(seed_ ^ mix64(label ^ 0x5851f42d4c957f2dULL)));
}

double Rng::uniform(double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(engine_);
}

std::size_t Rng::uniform_index(std::size_t n) {
  if (n == 0) throw std::invalid_argument("uniform_index: empty range");
  return std::uniform_int_distribution<std::size_t>(0, n - 1)(engine_);
}

double Rng::standard_normal() { return normal_(engine_); }

double gaussian(Rng& rng, double mu, double sigma) {
  if (!(sigma >= 0.0)) throw std::invalid_argument("gaussian: sigma must be nonnegative");
  return mu + sigma * rng.standard_normal();
}

double resampled_fitness(const BenchmarkFunction& fn, std::span<const double> x, std::size_t rs,
                         const NoiseModel& noise, Rng& rng, Budget& budget) {
  if (rs == 0) throw std::invalid_argument("resampled_fitness: rs must be >= 1");
  const double f = evaluate(fn, x);
  // Averaging only the disturbance keeps the sigma == 0 case bit-exact.
  double noise_sum = 0.0;
  for (std::size_t i = 0; i < rs; ++i) noise_sum += gaussian(rng, noise.mu, noise.sigma);
  budget.total_eval += rs;
  return f + noise_sum / static_cast<double>(rs);
}

}  // namespace dpsea
