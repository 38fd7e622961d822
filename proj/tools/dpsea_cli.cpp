// Command-line front end: run experiment sweeps and post-process result
// directories.
//
//   dpsea run --config exp.json --algo cga --rs 1,5,20 --sigma 0,0.5 --out results
//   dpsea summarize --in results
//   dpsea success --in results --epsilon 1e-3
//
// Exit codes: 0 success, 1 invalid configuration or input, 2 unwritable output.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dpsea/config.hpp"
#include "dpsea/harness.hpp"

namespace {

using namespace dpsea;

template <typename T>
std::vector<T> parse_list(const std::string& text) {
  std::vector<T> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    std::istringstream is(item);
    T v{};
    if (!(is >> v) || !is.eof()) throw ConfigError("bad list element '" + item + "'");
    out.push_back(v);
  }
  if (out.empty()) throw ConfigError("empty list '" + text + "'");
  return out;
}

std::string trace_csv(const ExperimentConfig& cfg, const std::vector<RunOutcome>& outcomes) {
  std::string out = "sigma,rs,repeat,cycle,total_eval,best_true_fitness,clusters,eligible\n";
  (void)cfg;
  for (const auto& o : outcomes) {
    for (const auto& t : o.result.trace) {
      out += format_double(o.record.sigma) + ',' + std::to_string(o.record.rs) + ',' +
             std::to_string(o.record.repeat) + ',' + std::to_string(t.cycle) + ',' +
             std::to_string(t.total_eval) + ',' + format_double(t.best_true_fitness) + ',' +
             std::to_string(t.clusters) + ',' + std::to_string(t.eligible) + '\n';
    }
  }
  return out;
}

void print_summary(const std::vector<CellSummary>& cells) {
  std::printf("%-11s %4s %-6s %8s %5s %6s %14s %14s %8s\n", "function", "dim", "algo", "sigma",
              "rs", "runs", "mean", "std", "success");
  for (const auto& c : cells) {
    std::printf("%-11s %4zu %-6s %8g %5zu %6zu %14.6e %14.6e %7d%%\n", c.function.c_str(),
                c.dimension, c.algo.c_str(), c.sigma, c.rs, c.count, c.mean, c.stddev,
                c.success_percent);
  }
}

int cmd_run(const std::string& config_path, const std::string& algo, const std::string& function,
            const std::string& rs_list, const std::string& sigma_list, std::size_t repeats,
            const std::string& seed, const std::string& out, const std::string& format,
            bool timing, bool trace) {
  ExperimentConfig cfg;
  try {
    if (!config_path.empty()) cfg = load_config_file(config_path);
    if (!algo.empty()) cfg.algo = parse_algo(algo);
    if (!function.empty()) cfg.function = parse_function_id(function);
    if (!rs_list.empty()) cfg.rs = parse_list<std::size_t>(rs_list);
    if (!sigma_list.empty()) cfg.sigmas = parse_list<double>(sigma_list);
    if (repeats > 0) cfg.repeats = repeats;
    if (!seed.empty()) cfg.seed = parse_list<std::uint64_t>(seed).front();
    if (!out.empty()) cfg.out_dir = out;
    if (!format.empty()) cfg.format = parse_format(format);
    if (timing) cfg.timing = true;
    if (trace) cfg.trace = true;
    cfg.resolve();
    cfg.validate();
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }

  const int threads = threads_from_env();
  const auto outcomes = run_experiment(cfg, threads);
  std::vector<RunRecord> records;
  records.reserve(outcomes.size());
  for (const auto& o : outcomes) records.push_back(o.record);
  const auto cells = summarize(records);

  try {
    emit(records, cells, cfg.format, cfg.out_dir);
    write_atomic(cfg.out_dir / "experiment.json", config_to_json(cfg).dump(2) + "\n");
    if (cfg.trace) write_atomic(cfg.out_dir / "trace.csv", trace_csv(cfg, outcomes));
  } catch (const OutputError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
  std::printf("seed %llu, %zu runs -> %s\n", static_cast<unsigned long long>(*cfg.seed),
              records.size(), cfg.out_dir.string().c_str());
  print_summary(cells);
  return 0;
}

int cmd_summarize(const std::string& dir) {
  try {
    print_summary(summarize(load_runs(dir)));
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

int cmd_success(const std::string& dir, double epsilon) {
  try {
    const auto records = load_runs(dir);
    if (records.empty()) throw std::runtime_error("no runs in " + dir);
    ExperimentConfig cfg;
    const auto meta = std::filesystem::path(dir) / "experiment.json";
    if (std::filesystem::exists(meta)) {
      std::ifstream in(meta);
      auto tree = nlohmann::json::parse(in);
      cfg = config_from_json(tree);
    } else {
      cfg.function = parse_function_id(records.front().function);
      cfg.dimension = records.front().dimension;
    }
    if (epsilon > 0.0) cfg.success.epsilon[cfg.function] = epsilon;
    const BenchmarkFunction fn = cfg.benchmark();
    const auto rows = success_rate(records, cfg.success, cfg.function, optimum(fn).value);
    std::printf("success rates for %s (%zu-D), epsilon %g\n", std::string(to_string(cfg.function)).c_str(),
                fn.dimension, cfg.success.threshold(cfg.function));
    std::printf("%8s %5s %8s %8s\n", "sigma", "rs", "runs", "success");
    for (const auto& r : rows) {
      std::printf("%8g %5zu %8zu %7d%%\n", r.sigma, r.rs, r.repeats, r.percent);
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noisy-fitness optimizers: DPSEA and fixed-budget baselines"};
  app.require_subcommand(1);

  std::string config_path, algo, function, rs_list, sigma_list, seed, out, format;
  std::size_t repeats = 0;
  bool timing = false, trace = false;
  auto* run = app.add_subcommand("run", "Run an experiment sweep");
  run->add_option("--config", config_path, "JSON experiment config");
  run->add_option("--algo", algo, "dpsea, cga, de or pso");
  run->add_option("--function", function, "sphere, griewank, rastrigin1 or rosenbrock");
  run->add_option("--rs", rs_list, "Comma-separated resampling counts");
  run->add_option("--sigma", sigma_list, "Comma-separated noise standard deviations");
  run->add_option("--repeats", repeats, "Runs per (sigma, rs) cell");
  run->add_option("--seed", seed, "Base seed (default: from entropy, recorded in output)");
  run->add_option("--out", out, "Output directory");
  run->add_option("--format", format, "csv or json");
  run->add_flag("--timing", timing, "Record wall times in runs output");
  run->add_flag("--trace", trace, "Write per-cycle DPSEA trace.csv");

  std::string in_dir;
  double epsilon = 0.0;
  auto* sum = app.add_subcommand("summarize", "Mean and std per (sigma, rs) cell");
  sum->add_option("--in", in_dir, "Results directory")->required();
  auto* succ = app.add_subcommand("success", "Success rates per (sigma, rs) cell");
  succ->add_option("--in", in_dir, "Results directory")->required();
  succ->add_option("--epsilon", epsilon, "Override the success threshold");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (*run) {
    return cmd_run(config_path, algo, function, rs_list, sigma_list, repeats, seed, out, format,
                   timing, trace);
  }
  if (*sum) return cmd_summarize(in_dir);
  return cmd_success(in_dir, epsilon);
}
