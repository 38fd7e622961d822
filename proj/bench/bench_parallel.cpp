// Wall-clock comparison of the serial and OpenMP paths.
//
//   bench_parallel [threads] [repeats]
//
// Runs the same sweep through run_experiment_serial and run_experiment, and a
// single DPSEA run with per-cluster parallelism off and on; checks that each
// pair produced identical results.

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <omp.h>

#include "dpsea/harness.hpp"

using namespace dpsea;

namespace {

template <typename F>
double time_ms(F&& f) {
  const auto t0 = std::chrono::steady_clock::now();
  f();
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
}

bool same_records(const std::vector<RunOutcome>& a, const std::vector<RunOutcome>& b) {
  std::vector<RunRecord> ra, rb;
  for (const auto& o : a) ra.push_back(o.record);
  for (const auto& o : b) rb.push_back(o.record);
  return runs_to_csv(ra) == runs_to_csv(rb);
}

}  // namespace

int main(int argc, char** argv) {
  const int threads = argc > 1 ? std::atoi(argv[1]) : omp_get_max_threads();
  const std::size_t repeats = argc > 2 ? std::strtoull(argv[2], nullptr, 10) : 8;

  ExperimentConfig cfg;
  cfg.function = FunctionId::Sphere;
  cfg.algo = Algo::Dpsea;
  cfg.sigmas = {0.0, 0.5};
  cfg.repeats = repeats;
  cfg.seed = 2024;
  cfg.resolve();

  std::vector<RunOutcome> serial, parallel;
  const double t_serial = time_ms([&] { serial = run_experiment_serial(cfg); });
  const double t_parallel = time_ms([&] { parallel = run_experiment(cfg, threads); });
  std::printf("sweep (%zu runs)     serial %9.1f ms   omp x%d %9.1f ms   speedup %.2f   %s\n",
              serial.size(), t_serial, threads, t_parallel, t_serial / t_parallel,
              same_records(serial, parallel) ? "identical" : "MISMATCH");

  const auto fn = make_function(FunctionId::Griewank);
  DpseaParams params;
  params.max_total_eval = dpsea_eval_cap(FunctionId::Griewank);
  RunResult off, on;
  const double t_off = time_ms([&] {
    params.parallel_clusters = false;
    Rng rng(7);
    off = run_dpsea(fn, {0.0, 0.3}, params, rng);
  });
  const double t_on = time_ms([&] {
    params.parallel_clusters = true;
    Rng rng(7);
    on = run_dpsea(fn, {0.0, 0.3}, params, rng);
  });
  std::printf("griewank clusters    serial %9.1f ms   omp    %9.1f ms   speedup %.2f   %s\n", t_off,
              t_on, t_off / t_on,
              off.best_true_fitness == on.best_true_fitness &&
                      off.budget.total_eval == on.budget.total_eval
                  ? "identical"
                  : "MISMATCH");
  return 0;
}
