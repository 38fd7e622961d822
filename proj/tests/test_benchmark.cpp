#include <cmath>
#include <stdexcept>
#include <numbers>

#include "doctest.h"
#include "dpsea/benchmark.hpp"
#include "dpsea/stochastics.hpp"

using namespace dpsea;

namespace {

// Straight transcriptions of the four test functions, kept apart from the
// library on purpose.
double ref_sphere(const std::vector<double>& x) {
  double s = 0;
  for (double v : x) s += v * v;
  return s;
}

double ref_griewank(const std::vector<double>& x) {
  double s = 0, p = 1;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double d = x[i] - 100.0;
    s += d * d;
    p *= std::cos(d / std::sqrt(static_cast<double>(i + 1)));
  }
  return s / 4000.0 - p + 1.0;
}

double ref_rastrigin(const std::vector<double>& x, double c) {
  double s = c;
  for (double v : x) s += v * v - 10.0 * std::cos(2.0 * std::numbers::pi * v);
  return s;
}

double ref_rosenbrock(const std::vector<double>& x) {
  double s = 0;
  for (std::size_t i = 0; i + 1 < x.size(); ++i) {
    const double a = x[i + 1] - x[i] * x[i];
    s += 100.0 * a * a + (x[i] - 1.0) * (x[i] - 1.0);
  }
  return s;
}

std::vector<double> random_point(const BenchmarkFunction& fn, Rng& rng) {
  std::vector<double> x(fn.dimension);
  for (auto& v : x) v = rng.uniform(fn.lower_bound, fn.upper_bound);
  return x;
}

constexpr FunctionId kAll[] = {FunctionId::Sphere, FunctionId::Griewank, FunctionId::RastriginF1,
                               FunctionId::Rosenbrock};

}  // namespace

TEST_SUITE("benchmark") {

TEST_CASE("known optima evaluate to zero") {
  CHECK(evaluate(make_function(FunctionId::Sphere), std::vector<double>(5, 0.0)) == 0.0);
  CHECK(evaluate(make_function(FunctionId::Griewank), std::vector<double>(50, 100.0)) ==
        doctest::Approx(0.0).epsilon(1e-15));
  CHECK(evaluate(make_function(FunctionId::Rosenbrock), std::vector<double>(50, 1.0)) == 0.0);
  const auto rastrigin = make_function(FunctionId::RastriginF1);
  CHECK(rastrigin.rastrigin_constant == 500.0);
  CHECK(evaluate(rastrigin, std::vector<double>(50, 0.0)) == doctest::Approx(0.0));
}

TEST_CASE("sphere hand value") {
  CHECK(evaluate(make_function(FunctionId::Sphere), std::vector<double>{1, 2, 3, 4, 5}) == 55.0);
}

TEST_CASE("defaults: dimensions and bounds") {
  CHECK(make_function(FunctionId::Sphere).dimension == 5);
  CHECK(make_function(FunctionId::Griewank).upper_bound == 600.0);
  CHECK(make_function(FunctionId::RastriginF1).lower_bound == -5.12);
  CHECK(make_function(FunctionId::Rosenbrock).upper_bound == 50.0);
  for (auto id : kAll) {
    CHECK(default_dimension(id) == make_function(id).dimension);
    CHECK(parse_function_id(to_string(id)) == id);
  }
  CHECK_THROWS_AS(parse_function_id("ackley"), std::invalid_argument);
}

TEST_CASE("optimum with the literal rastrigin constant") {
  auto fn = make_function(FunctionId::RastriginF1);
  fn.rastrigin_constant = 200.0;
  const auto opt = optimum(fn);
  CHECK(opt.value == -300.0);
  CHECK(opt.location == std::vector<double>(50, 0.0));
  CHECK(evaluate(fn, opt.location) == doctest::Approx(-300.0));
  CHECK(optimum(make_function(FunctionId::Griewank)).location == std::vector<double>(50, 100.0));
}

TEST_CASE("matches reference transcriptions on random points") {
  Rng rng(17);
  for (auto id : kAll) {
    const auto fn = make_function(id);
    for (int k = 0; k < 200; ++k) {
      const auto x = random_point(fn, rng);
      double expect = 0;
      switch (id) {
        case FunctionId::Sphere: expect = ref_sphere(x); break;
        case FunctionId::Griewank: expect = ref_griewank(x); break;
        case FunctionId::RastriginF1: expect = ref_rastrigin(x, fn.rastrigin_constant); break;
        case FunctionId::Rosenbrock: expect = ref_rosenbrock(x); break;
      }
      CHECK(evaluate(fn, x) == doctest::Approx(expect).epsilon(1e-12));
    }
  }
}

TEST_CASE("no random point beats the optimum; defaults are nonnegative") {
  Rng rng(3);
  for (auto id : kAll) {
    const auto fn = make_function(id);
    const double best = optimum(fn).value;
    for (int k = 0; k < 10000; ++k) {
      const double f = evaluate(fn, random_point(fn, rng));
      REQUIRE(f >= best);
      REQUIRE(f >= 0.0);
    }
  }
}

TEST_CASE("input validation") {
  const auto fn = make_function(FunctionId::Sphere);
  CHECK_THROWS_AS(evaluate(fn, std::vector<double>(4, 0.0)), std::invalid_argument);
  CHECK_THROWS_AS(evaluate(fn, std::vector<double>{0, 0, 0, 0, 100.5}), std::invalid_argument);
  CHECK_NOTHROW(evaluate(fn, std::vector<double>{-100, 100, 0, 0, 0}));
}

TEST_CASE("noisy evaluation") {
  const auto fn = make_function(FunctionId::Sphere);
  const std::vector<double> x{1, -2, 0.5, 3, 0};
  Rng rng(5);
  CHECK(noisy_evaluate(fn, x, {0.0, 0.0}, rng) == evaluate(fn, x));

  Rng a(99), b(99);
  const std::vector<double> origin(5, 0.0);
  CHECK(noisy_evaluate(fn, origin, {}, a) == noisy_evaluate(fn, origin, {}, b));

  Rng rng2(2024);
  double sum = 0;
  const int n = 10000;
  for (int i = 0; i < n; ++i) sum += noisy_evaluate(fn, origin, {0.0, 1.0}, rng2);
  CHECK(std::abs(sum / n) <= 0.04);
}

TEST_CASE("noise averages out: |mean - f| <= 4 sigma / sqrt(n)") {
  const auto fn = make_function(FunctionId::Rosenbrock);
  Rng rng(8);
  const auto x = random_point(fn, rng);
  const double f = evaluate(fn, x);
  for (double sigma : {0.1, 1.0, 5.0}) {
    for (int n : {10, 100, 1000}) {
      double sum = 0;
      for (int i = 0; i < n; ++i) sum += noisy_evaluate(fn, x, {0.0, sigma}, rng);
      CHECK(std::abs(sum / n - f) <= 4.0 * sigma / std::sqrt(static_cast<double>(n)));
    }
  }
}

}  // TEST_SUITE
