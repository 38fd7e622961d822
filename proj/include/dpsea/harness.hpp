#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "dpsea/baselines.hpp"
#include "dpsea/engine.hpp"

namespace dpsea {

enum class Algo { Dpsea, Cga, De, Pso };
enum class OutputFormat { Csv, Json };

std::string_view to_string(Algo algo);
Algo parse_algo(std::string_view name);
std::string_view to_string(OutputFormat format);
OutputFormat parse_format(std::string_view name);

/// Invalid experiment configuration.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Output directory or file could not be written.
struct OutputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Per-function tolerance on best_true_fitness - optimum.
struct SuccessCriterion {
  std::map<FunctionId, double> epsilon{{FunctionId::Sphere, 1e-3},
                                       {FunctionId::Griewank, 1e-2},
                                       {FunctionId::RastriginF1, 1e-1},
                                       {FunctionId::Rosenbrock, 50.0}};

  double threshold(FunctionId id) const;
  bool accepts(FunctionId id, double best_true_fitness, double optimum_value) const;
};

enum class RepeatMode { Success, Stats };

struct ExperimentConfig {
  FunctionId function = FunctionId::Sphere;
  /// 0 selects the function's default dimension.
  std::size_t dimension = 0;
  std::optional<double> rastrigin_constant;
  bool noisy = true;
  double mu = 0.0;
  std::vector<double> sigmas{1.0};
  Algo algo = Algo::Dpsea;
  std::vector<std::size_t> rs{1};
  RepeatMode mode = RepeatMode::Stats;
  /// Unset: 100 in success mode, 30 in stats mode.
  std::optional<std::size_t> repeats;
  /// Unset: drawn from entropy by resolve().
  std::optional<std::uint64_t> seed;
  /// Unset: the per-algorithm default budget for the function.
  std::optional<std::uint64_t> total_eval;
  std::filesystem::path out_dir = "results";
  OutputFormat format = OutputFormat::Csv;
  /// Record wall times. Off by default so reruns produce identical files.
  bool timing = false;
  bool trace = false;

  DpseaParams dpsea;
  CgaConfig cga;
  DeConfig de;
  PsoConfig pso;
  SuccessCriterion success;

  BenchmarkFunction benchmark() const;
  std::size_t repeat_count() const;
  std::uint64_t eval_budget() const;
  /// Sigma sweep actually run (just {0} when noise is off).
  std::vector<double> sigma_sweep() const;
  std::size_t population_size() const;

  /// Throws ConfigError.
  void validate() const;
  /// Fills in the seed from entropy when absent.
  void resolve();
};

struct RunRecord {
  std::string function;
  std::size_t dimension = 0;
  bool noisy = false;
  double sigma = 0.0;
  std::string algo;
  std::size_t rs = 1;
  std::size_t repeat = 0;
  std::uint64_t seed = 0;
  double best_true_fitness = 0.0;
  std::uint64_t total_eval = 0;
  bool success = false;
  double wall_ms = 0.0;

  bool operator==(const RunRecord&) const = default;
};

/// Seed of one run, a fixed mixing of the base seed and the sweep indices.
std::uint64_t run_seed(std::uint64_t base_seed, std::size_t sigma_index, std::size_t rs_index,
                       std::size_t repeat);

struct RunOutcome {
  RunRecord record;
  RunResult result;
};

/// Executes one configured run.
RunOutcome run_single(const ExperimentConfig& cfg, std::size_t sigma_index, std::size_t rs_index,
                      std::size_t repeat);

/// Reference sweep: every (sigma, rs, repeat) run in index order.
std::vector<RunOutcome> run_experiment_serial(const ExperimentConfig& cfg);

/// Same results as run_experiment_serial, computed with up to `threads`
/// OpenMP threads (0 or 1 runs serially).
std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg, int threads);

/// DPSEA_THREADS, or 0 when unset or unparsable.
int threads_from_env();

struct CellSummary {
  std::string function;
  std::size_t dimension = 0;
  bool noisy = false;
  double sigma = 0.0;
  std::string algo;
  std::size_t rs = 1;
  std::size_t count = 0;
  double mean = 0.0;
  /// Sample standard deviation (n - 1); 0 for a single record.
  double stddev = 0.0;
  /// Integer percent of successful runs.
  int success_percent = 0;
};

/// Mean and sample standard deviation of best_true_fitness per
/// (sigma, rs) cell, cells in first-seen order.
std::vector<CellSummary> summarize(const std::vector<RunRecord>& records);

struct SuccessRow {
  double sigma = 0.0;
  std::size_t rs = 1;
  std::size_t successes = 0;
  std::size_t repeats = 0;
  int percent = 0;
};

/// Success percentage per (sigma, rs) cell, recomputed from best_true_fitness.
std::vector<SuccessRow> success_rate(const std::vector<RunRecord>& records,
                                     const SuccessCriterion& criterion, FunctionId function,
                                     double optimum_value);

int rounded_percent(std::size_t hits, std::size_t total);

// Serialization -------------------------------------------------------------

extern const char* const kRunsCsvHeader;

/// Shortest decimal text that parses back to the same double.
std::string format_double(double v);

std::string runs_to_csv(const std::vector<RunRecord>& records);
std::vector<RunRecord> runs_from_csv(const std::string& text);
std::string runs_to_json(const std::vector<RunRecord>& records);
std::vector<RunRecord> runs_from_json(const std::string& text);
std::string summary_to_csv(const std::vector<CellSummary>& cells);
std::string summary_to_json(const std::vector<CellSummary>& cells);

/// Writes `text` to `path` via a temporary file and rename. Throws OutputError.
void write_atomic(const std::filesystem::path& path, const std::string& text);

/// Writes runs.<ext> and summary.<ext> into `dir`. Throws OutputError.
void emit(const std::vector<RunRecord>& records, const std::vector<CellSummary>& summaries,
          OutputFormat format, const std::filesystem::path& dir);

/// Loads runs.csv or runs.json from a results directory.
std::vector<RunRecord> load_runs(const std::filesystem::path& dir);

}  // namespace dpsea
