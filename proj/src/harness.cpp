#include "dpsea/harness.hpp"

#include <omp.h>

#include <charconv>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>
#include <system_error>

#include "json.hpp"

namespace dpsea {

std::string_view to_string(Algo algo) {
  switch (algo) {
    case Algo::Dpsea: return "dpsea";
    case Algo::Cga: return "cga";
    case Algo::De: return "de";
    case Algo::Pso: return "pso";
  }
  return "unknown";
}

Algo parse_algo(std::string_view name) {
  if (name == "dpsea") return Algo::Dpsea;
  if (name == "cga") return Algo::Cga;
  if (name == "de") return Algo::De;
  if (name == "pso") return Algo::Pso;
  throw ConfigError("unknown algorithm '" + std::string(name) + "'");
}

std::string_view to_string(OutputFormat format) {
  return format == OutputFormat::Csv ? "csv" : "json";
}

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("unknown output format '" + std::string(name) + "'");
}

double SuccessCriterion::threshold(FunctionId id) const {
  const auto it = epsilon.find(id);
  if (it == epsilon.end()) throw ConfigError("no success threshold for " + std::string(to_string(id)));
  return it->second;
}

bool SuccessCriterion::accepts(FunctionId id, double best_true_fitness, double optimum_value) const {
  return best_true_fitness - optimum_value <= threshold(id);
}

// ExperimentConfig ----------------------------------------------------------

BenchmarkFunction ExperimentConfig::benchmark() const {
  BenchmarkFunction fn = make_function(function, dimension);
  if (rastrigin_constant) fn.rastrigin_constant = *rastrigin_constant;
  return fn;
}

std::size_t ExperimentConfig::repeat_count() const {
  if (repeats) return *repeats;
  return mode == RepeatMode::Success ? 100 : 30;
}

std::uint64_t ExperimentConfig::eval_budget() const {
  if (total_eval) return *total_eval;
  return algo == Algo::Dpsea ? dpsea_eval_cap(function) : baseline_eval_budget(function);
}

std::vector<double> ExperimentConfig::sigma_sweep() const {
  if (!noisy) return {0.0};
  return sigmas;
}

std::size_t ExperimentConfig::population_size() const {
  switch (algo) {
    case Algo::Dpsea: return dpsea.ga.pop_size;
    case Algo::Cga: return cga.ga.pop_size;
    case Algo::De: return de.pop_size;
    case Algo::Pso: return pso.pop_size;
  }
  return 0;
}

void ExperimentConfig::validate() const {
  if (repeats && *repeats == 0) throw ConfigError("repeats must be >= 1");
  if (noisy && sigmas.empty()) throw ConfigError("sigma sweep is empty");
  if (rs.empty()) throw ConfigError("rs sweep is empty");
  for (double s : sigmas) {
    if (!(s >= 0.0) || !std::isfinite(s)) throw ConfigError("sigma values must be finite and >= 0");
  }
  for (std::size_t r : rs) {
    if (r == 0) throw ConfigError("rs values must be >= 1");
    const auto need = static_cast<std::uint64_t>(population_size()) * r;
    if (eval_budget() < need) {
      throw ConfigError("total_eval " + std::to_string(eval_budget()) + " is below one round (" +
                        std::to_string(need) + " evaluations at rs=" + std::to_string(r) + ")");
    }
  }
  try {
    (void)success.threshold(function);
    switch (algo) {
      case Algo::Dpsea: dpsea.validate(); break;
      case Algo::Cga: cga.ga.validate(); break;
      case Algo::De: {
        DeConfig probe = de;
        probe.total_eval = eval_budget();
        probe.validate();
        break;
      }
      case Algo::Pso: {
        PsoConfig probe = pso;
        probe.total_eval = eval_budget();
        probe.validate();
        break;
      }
    }
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  for (const auto& [id, eps] : success.epsilon) {
    if (!(eps > 0.0)) throw ConfigError("success thresholds must be positive");
  }
}

void ExperimentConfig::resolve() {
  if (!seed) {
    std::random_device rd;
    seed = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
}

// Runs ----------------------------------------------------------------------

std::uint64_t run_seed(std::uint64_t base_seed, std::size_t sigma_index, std::size_t rs_index,
                       std::size_t repeat) {
  std::uint64_t h = mix64(base_seed);
  h = mix64(h ^ (0x100000001b3ULL * (sigma_index + 1)));
  h = mix64(h ^ (0xc2b2ae3d27d4eb4fULL * (rs_index + 1)));
  h = mix64(h ^ (0x165667b19e3779f9ULL * (repeat + 1)));
  return h;
}

RunOutcome run_single(const ExperimentConfig& cfg, std::size_t sigma_index, std::size_t rs_index,
                      std::size_t repeat) {
  const auto sigmas = cfg.sigma_sweep();
  const double sigma = sigmas.at(sigma_index);
  const std::size_t rs = cfg.rs.at(rs_index);
  const BenchmarkFunction fn = cfg.benchmark();
  const NoiseModel noise{cfg.mu, sigma};
  const std::uint64_t seed = run_seed(cfg.seed.value_or(0), sigma_index, rs_index, repeat);
  Rng rng(seed);

  const auto started = std::chrono::steady_clock::now();
  RunResult result;
  switch (cfg.algo) {
    case Algo::Dpsea: {
      DpseaParams p = cfg.dpsea;
      p.rs_merge = rs;
      p.max_total_eval = cfg.eval_budget();
      result = run_dpsea(fn, noise, p, rng);
      break;
    }
    case Algo::Cga: {
      CgaConfig c = cfg.cga;
      c.rs = rs;
      c.total_eval = cfg.eval_budget();
      result = run_cga(fn, noise, c, rng);
      break;
    }
    case Algo::De: {
      DeConfig c = cfg.de;
      c.rs = rs;
      c.total_eval = cfg.eval_budget();
      result = run_de(fn, noise, c, rng);
      break;
    }
    case Algo::Pso: {
      PsoConfig c = cfg.pso;
      c.rs = rs;
      c.total_eval = cfg.eval_budget();
      result = run_pso(fn, noise, c, rng);
      break;
    }
  }
  const auto elapsed = std::chrono::steady_clock::now() - started;

  RunOutcome out;
  RunRecord& rec = out.record;
  rec.function = std::string(to_string(cfg.function));
  rec.dimension = fn.dimension;
  rec.noisy = cfg.noisy;
  rec.sigma = sigma;
  rec.algo = std::string(to_string(cfg.algo));
  rec.rs = rs;
  rec.repeat = repeat;
  rec.seed = seed;
  rec.best_true_fitness = result.best_true_fitness;
  rec.total_eval = result.budget.total_eval;
  rec.success = cfg.success.accepts(cfg.function, result.best_true_fitness, optimum(fn).value);
  rec.wall_ms =
      cfg.timing ? std::chrono::duration<double, std::milli>(elapsed).count() : 0.0;
  out.result = std::move(result);
  return out;
}

namespace {

struct CellIndex {
  std::size_t sigma, rs, repeat;
};

std::vector<CellIndex> sweep_indices(const ExperimentConfig& cfg) {
  std::vector<CellIndex> cells;
  const std::size_t ns = cfg.sigma_sweep().size();
  for (std::size_t s = 0; s < ns; ++s) {
    for (std::size_t r = 0; r < cfg.rs.size(); ++r) {
      for (std::size_t k = 0; k < cfg.repeat_count(); ++k) cells.push_back({s, r, k});
    }
  }
  return cells;
}

}  // namespace

std::vector<RunOutcome> run_experiment_serial(const ExperimentConfig& cfg) {
  cfg.validate();
  std::vector<RunOutcome> out;
  for (const auto& c : sweep_indices(cfg)) out.push_back(run_single(cfg, c.sigma, c.rs, c.repeat));
  return out;
}

std::vector<RunOutcome> run_experiment(const ExperimentConfig& cfg, int threads) {
  if (threads <= 1) return run_experiment_serial(cfg);
  cfg.validate();
  const auto cells = sweep_indices(cfg);
  std::vector<RunOutcome> out(cells.size());
  std::exception_ptr failure;
  const auto count = static_cast<std::ptrdiff_t>(cells.size());
#pragma omp parallel for schedule(dynamic) num_threads(threads)
  for (std::ptrdiff_t i = 0; i < count; ++i) {
    try {
      const auto& c = cells[static_cast<std::size_t>(i)];
      out[static_cast<std::size_t>(i)] = run_single(cfg, c.sigma, c.rs, c.repeat);
    } catch (...) {
#pragma omp critical(dpsea_run_failure)
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

int threads_from_env() {
  const char* value = std::getenv("DPSEA_THREADS");
  if (value == nullptr) return 0;
  int n = 0;
  const auto* end = value + std::char_traits<char>::length(value);
  const auto [ptr, ec] = std::from_chars(value, end, n);
  if (ec != std::errc() || ptr != end || n < 0) return 0;
  return n;
}

// Statistics ----------------------------------------------------------------

int rounded_percent(std::size_t hits, std::size_t total) {
  if (total == 0) return 0;
  return static_cast<int>(std::lround(100.0 * static_cast<double>(hits) / static_cast<double>(total)));
}

std::vector<CellSummary> summarize(const std::vector<RunRecord>& records) {
  std::vector<CellSummary> cells;
  std::vector<std::vector<const RunRecord*>> members;
  for (const auto& r : records) {
    std::size_t idx = cells.size();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      const auto& c = cells[i];
      if (c.sigma == r.sigma && c.rs == r.rs && c.function == r.function && c.algo == r.algo &&
          c.dimension == r.dimension && c.noisy == r.noisy) {
        idx = i;
        break;
      }
    }
    if (idx == cells.size()) {
      CellSummary c;
      c.function = r.function;
      c.dimension = r.dimension;
      c.noisy = r.noisy;
      c.sigma = r.sigma;
      c.algo = r.algo;
      c.rs = r.rs;
      cells.push_back(c);
      members.emplace_back();
    }
    members[idx].push_back(&r);
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    auto& c = cells[i];
    const auto& m = members[i];
    c.count = m.size();
    double sum = 0.0;
    std::size_t hits = 0;
    for (const auto* r : m) {
      sum += r->best_true_fitness;
      hits += r->success ? 1 : 0;
    }
    c.mean = sum / static_cast<double>(m.size());
    if (m.size() > 1) {
      double ss = 0.0;
      for (const auto* r : m) ss += (r->best_true_fitness - c.mean) * (r->best_true_fitness - c.mean);
      c.stddev = std::sqrt(ss / static_cast<double>(m.size() - 1));
    }
    c.success_percent = rounded_percent(hits, m.size());
  }
  return cells;
}

std::vector<SuccessRow> success_rate(const std::vector<RunRecord>& records,
                                     const SuccessCriterion& criterion, FunctionId function,
                                     double optimum_value) {
  std::vector<SuccessRow> rows;
  for (const auto& r : records) {
    auto it = std::find_if(rows.begin(), rows.end(),
                           [&](const SuccessRow& row) { return row.sigma == r.sigma && row.rs == r.rs; });
    if (it == rows.end()) {
      rows.push_back({r.sigma, r.rs, 0, 0, 0});
      it = rows.end() - 1;
    }
    it->repeats += 1;
    if (criterion.accepts(function, r.best_true_fitness, optimum_value)) it->successes += 1;
  }
  for (auto& row : rows) row.percent = rounded_percent(row.successes, row.repeats);
  return rows;
}

// Serialization -------------------------------------------------------------

const char* const kRunsCsvHeader =
    "function,dimension,noisy,sigma,algo,rs,repeat,seed,best_true_fitness,total_eval,success,wall_ms";

std::string format_double(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

namespace {

const char* bool_text(bool b) { return b ? "true" : "false"; }

std::vector<std::string> split(const std::string& line, char sep) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream in(line);
  while (std::getline(in, field, sep)) out.push_back(field);
  if (!line.empty() && line.back() == sep) out.emplace_back();
  return out;
}

template <typename T>
T parse_number(const std::string& text, const char* what) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::runtime_error(std::string("bad ") + what + " field '" + text + "'");
  }
  return value;
}

bool parse_bool(const std::string& text) {
  if (text == "true") return true;
  if (text == "false") return false;
  throw std::runtime_error("bad boolean field '" + text + "'");
}

}  // namespace

std::string runs_to_csv(const std::vector<RunRecord>& records) {
  std::string out = kRunsCsvHeader;
  out += '\n';
  for (const auto& r : records) {
    out += r.function + ',' + std::to_string(r.dimension) + ',' + bool_text(r.noisy) + ',' +
           format_double(r.sigma) + ',' + r.algo + ',' + std::to_string(r.rs) + ',' +
           std::to_string(r.repeat) + ',' + std::to_string(r.seed) + ',' +
           format_double(r.best_true_fitness) + ',' + std::to_string(r.total_eval) + ',' +
           bool_text(r.success) + ',' + format_double(r.wall_ms) + '\n';
  }
  return out;
}

std::vector<RunRecord> runs_from_csv(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line) || line != kRunsCsvHeader) {
    throw std::runtime_error("runs csv: missing or unexpected header");
  }
  std::vector<RunRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split(line, ',');
    if (f.size() != 12) throw std::runtime_error("runs csv: expected 12 fields: " + line);
    RunRecord r;
    r.function = f[0];
    r.dimension = parse_number<std::size_t>(f[1], "dimension");
    r.noisy = parse_bool(f[2]);
    r.sigma = parse_number<double>(f[3], "sigma");
    r.algo = f[4];
    r.rs = parse_number<std::size_t>(f[5], "rs");
    r.repeat = parse_number<std::size_t>(f[6], "repeat");
    r.seed = parse_number<std::uint64_t>(f[7], "seed");
    r.best_true_fitness = parse_number<double>(f[8], "best_true_fitness");
    r.total_eval = parse_number<std::uint64_t>(f[9], "total_eval");
    r.success = parse_bool(f[10]);
    r.wall_ms = parse_number<double>(f[11], "wall_ms");
    out.push_back(std::move(r));
  }
  return out;
}

std::string runs_to_json(const std::vector<RunRecord>& records) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& r : records) {
    arr.push_back({{"function", r.function},
                   {"dimension", r.dimension},
                   {"noisy", r.noisy},
                   {"sigma", r.sigma},
                   {"algo", r.algo},
                   {"rs", r.rs},
                   {"repeat", r.repeat},
                   {"seed", r.seed},
                   {"best_true_fitness", r.best_true_fitness},
                   {"total_eval", r.total_eval},
                   {"success", r.success},
                   {"wall_ms", r.wall_ms}});
  }
  return arr.dump(2) + "\n";
}

std::vector<RunRecord> runs_from_json(const std::string& text) {
  const auto arr = nlohmann::json::parse(text);
  std::vector<RunRecord> out;
  for (const auto& j : arr) {
    RunRecord r;
    r.function = j.at("function").get<std::string>();
    r.dimension = j.at("dimension").get<std::size_t>();
    r.noisy = j.at("noisy").get<bool>();
    r.sigma = j.at("sigma").get<double>();
    r.algo = j.at("algo").get<std::string>();
    r.rs = j.at("rs").get<std::size_t>();
    r.repeat = j.at("repeat").get<std::size_t>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.best_true_fitness = j.at("best_true_fitness").get<double>();
    r.total_eval = j.at("total_eval").get<std::uint64_t>();
    r.success = j.at("success").get<bool>();
    r.wall_ms = j.at("wall_ms").get<double>();
    out.push_back(std::move(r));
  }
  return out;
}

std::string summary_to_csv(const std::vector<CellSummary>& cells) {
  std::string out = "function,dimension,noisy,sigma,algo,rs,count,mean,std,success_percent\n";
  for (const auto& c : cells) {
    out += c.function + ',' + std::to_string(c.dimension) + ',' + bool_text(c.noisy) + ',' +
           format_double(c.sigma) + ',' + c.algo + ',' + std::to_string(c.rs) + ',' +
           std::to_string(c.count) + ',' + format_double(c.mean) + ',' + format_double(c.stddev) +
           ',' + std::to_string(c.success_percent) + '\n';
  }
  return out;
}

std::string summary_to_json(const std::vector<CellSummary>& cells) {
  nlohmann::json arr = nlohmann::json::array();
  for (const auto& c : cells) {
    arr.push_back({{"function", c.function},
                   {"dimension", c.dimension},
                   {"noisy", c.noisy},
                   {"sigma", c.sigma},
                   {"algo", c.algo},
                   {"rs", c.rs},
                   {"count", c.count},
                   {"mean", c.mean},
                   {"std", c.stddev},
                   {"success_percent", c.success_percent}});
  }
  return arr.dump(2) + "\n";
}

void write_atomic(const std::filesystem::path& path, const std::string& text) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw OutputError("cannot write " + tmp.string());
    out << text;
    out.flush();
    if (!out) {
      std::error_code ec;
      std::filesystem::remove(tmp, ec);
      throw OutputError("write failed for " + tmp.string());
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::filesystem::remove(tmp, ec);
    throw OutputError("cannot rename into " + path.string());
  }
}

void emit(const std::vector<RunRecord>& records, const std::vector<CellSummary>& summaries,
          OutputFormat format, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec || !std::filesystem::is_directory(dir)) {
    throw OutputError("cannot create output directory " + dir.string());
  }
  if (format == OutputFormat::Csv) {
    write_atomic(dir / "runs.csv", runs_to_csv(records));
    write_atomic(dir / "summary.csv", summary_to_csv(summaries));
  } else {
    write_atomic(dir / "runs.json", runs_to_json(records));
    write_atomic(dir / "summary.json", summary_to_json(summaries));
  }
}

std::vector<RunRecord> load_runs(const std::filesystem::path& dir) {
  auto slurp = [](const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };
  if (std::filesystem::exists(dir / "runs.csv")) return runs_from_csv(slurp(dir / "runs.csv"));
  if (std::filesystem::exists(dir / "runs.json")) return runs_from_json(slurp(dir / "runs.json"));
  throw std::runtime_error("no runs.csv or runs.json in " + dir.string());
}

}  // namespace dpsea
