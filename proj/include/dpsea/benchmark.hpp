#pragma once

#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace dpsea {

class Rng;

enum class FunctionId { Sphere, Griewank, RastriginF1, Rosenbrock };

/// Lowercase identifier used in configs and on the command line
/// (`sphere`, `griewank`, `rastrigin1`, `rosenbrock`).
std::string_view to_string(FunctionId id);
FunctionId parse_function_id(std::string_view name);

/// A bound-constrained minimization test problem. Bounds are uniform per
/// coordinate.
struct BenchmarkFunction {
  FunctionId id = FunctionId::Sphere;
  std::size_t dimension = 5;
  double lower_bound = -100.0;
  double upper_bound = 100.0;
  /// Additive constant of the Rastrigin variant; ignored for other ids.
  double rastrigin_constant = 0.0;

  /// Diagonal length of the search box.
  double domain_diagonal() const;
};

/// Builds a function with its default bounds. `dimension == 0` selects the
/// default (5 for Sphere, 50 otherwise). The Rastrigin constant defaults to
/// 10 * dimension so the global minimum is zero.
BenchmarkFunction make_function(FunctionId id, std::size_t dimension = 0);

std::size_t default_dimension(FunctionId id);

/// Additive Gaussian disturbance N(mu, sigma^2), independent of x.
struct NoiseModel {
  double mu = 0.0;
  double sigma = 1.0;
};

struct Optimum {
  std::vector<double> location;
  double value = 0.0;
};

/// Noiseless fitness. Throws std::invalid_argument on a dimension mismatch
/// or an out-of-bounds coordinate; callers clamp before evaluating.
double evaluate(const BenchmarkFunction& fn, std::span<const double> x);

/// evaluate(fn, x) plus one draw from N(noise.mu, noise.sigma^2).
double noisy_evaluate(const BenchmarkFunction& fn, std::span<const double> x,
                      const NoiseModel& noise, Rng& rng);

Optimum optimum(const BenchmarkFunction& fn);

}  // namespace dpsea
