#include "dpsea/benchmark.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "dpsea/stochastics.hpp"

namespace dpsea {

std::string_view to_string(FunctionId id) {
  switch (id) {
    case FunctionId::Sphere: return "sphere";
    case FunctionId::Griewank: return "griewank";
    case FunctionId::RastriginF1: return "rastrigin1";
    case FunctionId::Rosenbrock: return "rosenbrock";
  }
  return "unknown";
}

FunctionId parse_function_id(std::string_view name) {
  if (name == "sphere") return FunctionId::Sphere;
  if (name == "griewank") return FunctionId::Griewank;
  if (name == "rastrigin1") return FunctionId::RastriginF1;
  if (name == "rosenbrock") return FunctionId::Rosenbrock;
  throw std::invalid_argument("unknown function id '" + std::string(name) + "'");
}

std::size_t default_dimension(FunctionId id) {
  return id == FunctionId::Sphere ? 5 : 50;
}

double BenchmarkFunction::domain_diagonal() const {
  return (upper_bound - lower_bound) * std::sqrt(static_cast<double>(dimension));
}

BenchmarkFunction make_function(FunctionId id, std::size_t dimension) {
  BenchmarkFunction fn;
  fn.id = id;
  fn.dimension = dimension == 0 ? default_dimension(id) : dimension;
  switch (id) {
    case FunctionId::Sphere:
      fn.lower_bound = -100.0;
      fn.upper_bound = 100.0;
      break;
    case FunctionId::Griewank:
      fn.lower_bound = -600.0;
      fn.upper_bound = 600.0;
      break;
    case FunctionId::RastriginF1:
      fn.lower_bound = -5.12;
      fn.upper_bound = 5.12;
      fn.rastrigin_constant = 10.0 * static_cast<double>(fn.dimension);
      break;
    case FunctionId::Rosenbrock:
      fn.lower_bound = -50.0;
      fn.upper_bound = 50.0;
      break;
  }
  return fn;
}

namespace {

void check_point(const BenchmarkFunction& fn, std::span<const double> x) {
  if (x.size() != fn.dimension) {
    throw std::invalid_argument("dimension mismatch: expected " + std::to_string(fn.dimension) +
                                ", got " + std::to_string(x.size()));
  }
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] >= fn.lower_bound && x[i] <= fn.upper_bound)) {
      throw std::invalid_argument("coordinate " + std::to_string(i) + " out of bounds: " +
                                  std::to_string(x[i]));
    }
  }
}

}  // namespace

double evaluate(const BenchmarkFunction& fn, std::span<const double> x) {
  check_point(fn, x);
  switch (fn.id) {
    case FunctionId::Sphere: {
      double sum = 0.0;
      for (double v : x) sum += v * v;
      return sum;
    }
    case FunctionId::Griewank: {
      double sum = 0.0;
      double prod = 1.0;
      for (std::size_t i = 0; i < x.size(); ++i) {
        const double s = x[i] - 100.0;
        sum += s * s;
        prod *= std::cos(s / std::sqrt(static_cast<double>(i + 1)));
      }
      return sum / 4000.0 - prod + 1.0;
    }
    case FunctionId::RastriginF1: {
      double sum = fn.rastrigin_constant;
      for (double v : x) sum += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
      return sum;
    }
    case FunctionId::Rosenbrock: {
      double sum = 0.0;
      for (std::size_t i = 0; i + 1 < x.size(); ++i) {
        const double a = x[i + 1] - x[i] * x[i];
        const double b = x[i] - 1.0;
        sum += 100.0 * a * a + b * b;
      }
      return sum;
    }
  }
  throw std::logic_error("unhandled function id");
}

double noisy_evaluate(const BenchmarkFunction& fn, std::span<const double> x,
                      const NoiseModel& noise, Rng& rng) {
  const double f = evaluate(fn, x);
  return f + gaussian(rng, noise.mu, noise.sigma);
}

Optimum optimum(const BenchmarkFunction& fn) {
  Optimum opt;
  switch (fn.id) {
    case FunctionId::Sphere:
      opt.location.assign(fn.dimension, 0.0);
      opt.value = 0.0;
      break;
    case FunctionId::Griewank:
      opt.location.assign(fn.dimension, 100.0);
      opt.value = 0.0;
      break;
    case FunctionId::RastriginF1:
      opt.location.assign(fn.dimension, 0.0);
      opt.value = fn.rastrigin_constant - 10.0 * static_cast<double>(fn.dimension);
      break;
    case FunctionId::Rosenbrock:
      opt.location.assign(fn.dimension, 1.0);
      opt.value = 0.0;
      break;
  }
  return opt;
}

}  // namespace dpsea
