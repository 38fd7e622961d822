#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "dpsea/config.hpp"
#include "dpsea/harness.hpp"

using namespace dpsea;
namespace fs = std::filesystem;

namespace {

ExperimentConfig quick_config() {
  ExperimentConfig cfg;
  cfg.function = FunctionId::Sphere;
  cfg.algo = Algo::Cga;
  cfg.sigmas = {1.0};
  cfg.rs = {1};
  cfg.repeats = 3;
  cfg.seed = 1234;
  cfg.total_eval = 3000;
  return cfg;
}

RunRecord record(double best, double sigma = 0.0, std::size_t rs = 1) {
  RunRecord r;
  r.function = "sphere";
  r.dimension = 5;
  r.noisy = true;
  r.sigma = sigma;
  r.algo = "dpsea";
  r.rs = rs;
  r.best_true_fitness = best;
  r.success = best <= 1e-3;
  return r;
}

fs::path scratch(const std::string& name) {
  auto dir = fs::temp_directory_path() / ("dpsea_test_" + name);
  fs::remove_all(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("harness") {

TEST_CASE("record counts") {
  auto cfg = quick_config();
  CHECK(run_experiment_serial(cfg).size() == 3);
  cfg.rs = {1, 5};
  cfg.sigmas = {0.0, 0.5};
  cfg.repeats = 2;
  const auto out = run_experiment_serial(cfg);
  CHECK(out.size() == 8);
  CHECK(out[0].record.seed != out[1].record.seed);
  cfg.noisy = false;
  CHECK(run_experiment_serial(cfg).size() == 4);
}

TEST_CASE("identical configs give identical records; parallel matches serial") {
  for (auto algo : {Algo::Dpsea, Algo::Cga, Algo::De, Algo::Pso}) {
    auto cfg = quick_config();
    cfg.algo = algo;
    cfg.rs = {1, 2};
    std::vector<RunRecord> a, b, c;
    for (const auto& o : run_experiment_serial(cfg)) a.push_back(o.record);
    for (const auto& o : run_experiment_serial(cfg)) b.push_back(o.record);
    for (const auto& o : run_experiment(cfg, 4)) c.push_back(o.record);
    CHECK(a == b);
    CHECK(a == c);
    for (const auto& r : a) CHECK(r.total_eval <= 3000);
  }
}

TEST_CASE("run seeds are stable and distinct") {
  CHECK(run_seed(1, 0, 0, 0) == run_seed(1, 0, 0, 0));
  CHECK(run_seed(1, 0, 0, 0) != run_seed(2, 0, 0, 0));
  CHECK(run_seed(1, 1, 0, 0) != run_seed(1, 0, 1, 0));
  CHECK(run_seed(1, 0, 0, 1) != run_seed(1, 0, 1, 0));
}

TEST_CASE("config defaults and validation") {
  ExperimentConfig cfg;
  CHECK(cfg.repeat_count() == 30);
  cfg.mode = RepeatMode::Success;
  CHECK(cfg.repeat_count() == 100);
  CHECK(cfg.eval_budget() == 90000);
  cfg.algo = Algo::Pso;
  CHECK(cfg.eval_budget() == 100000);
  cfg.function = FunctionId::Griewank;
  CHECK(cfg.eval_budget() == 500000);
  cfg.algo = Algo::Dpsea;
  CHECK(cfg.eval_budget() == 430000);
  CHECK(cfg.benchmark().dimension == 50);

  auto bad = quick_config();
  bad.repeats = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = quick_config();
  bad.rs = {};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = quick_config();
  bad.sigmas = {-1.0};
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = quick_config();
  bad.total_eval = 50;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = quick_config();
  bad.success.epsilon[FunctionId::Sphere] = 0.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  ExperimentConfig unseeded;
  unseeded.resolve();
  CHECK(unseeded.seed.has_value());
}

TEST_CASE("json config: keys, namespaces, rejection") {
  const auto tree = nlohmann::json::parse(R"({
    "function": "rosenbrock", "dimension": 10, "sigma": [0, 0.5], "rs": 5, "algo": "de",
    "mode": "success", "seed": 9, "total_eval": 20000,
    "de": {"cf": 0.9, "f_scale": 0.4},
    "dpsea": {"t_switch": 7, "kappa": 0.25, "p_m": 0.2},
    "regression": {"lambda": 0.001},
    "success": {"epsilon": {"rosenbrock": 10}}
  })");
  const auto cfg = config_from_json(tree);
  CHECK(cfg.function == FunctionId::Rosenbrock);
  CHECK(cfg.benchmark().dimension == 10);
  CHECK(cfg.sigmas == std::vector<double>{0.0, 0.5});
  CHECK(cfg.rs == std::vector<std::size_t>{5});
  CHECK(cfg.algo == Algo::De);
  CHECK(cfg.repeat_count() == 100);
  CHECK(cfg.de.cf == 0.9);
  CHECK(cfg.dpsea.t_switch == 7);
  CHECK(cfg.dpsea.ga.p_m == 0.2);
  CHECK(cfg.dpsea.lambda == 0.001);
  CHECK(cfg.success.threshold(FunctionId::Rosenbrock) == 10.0);

  const auto echoed = config_from_json(config_to_json(cfg));
  CHECK(config_to_json(echoed) == config_to_json(cfg));

  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"fnction": "sphere"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"de": {"pop": 3}})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"function": "ackley"})")), ConfigError);
  CHECK_THROWS_AS(config_from_json(nlohmann::json::parse(R"({"rs": "five"})")), ConfigError);
}

TEST_CASE("summaries") {
  auto cells = summarize({record(1), record(2), record(3)});
  REQUIRE(cells.size() == 1);
  CHECK(cells[0].mean == doctest::Approx(2.0));
  CHECK(cells[0].stddev == doctest::Approx(1.0));
  CHECK(cells[0].count == 3);

  cells = summarize({record(4.5)});
  CHECK(cells[0].mean == 4.5);
  CHECK(cells[0].stddev == 0.0);

  Rng rng(60);
  std::vector<RunRecord> synth;
  for (int i = 0; i < 1000; ++i) synth.push_back(record(gaussian(rng, 0.0, 1.0)));
  cells = summarize(synth);
  CHECK(std::abs(cells[0].mean) <= 0.13);
  CHECK(cells[0].stddev >= 0.9);
  CHECK(cells[0].stddev <= 1.1);

  cells = summarize({record(1, 0.0, 1), record(2, 0.5, 1), record(3, 0.0, 1), record(4, 0.0, 5)});
  REQUIRE(cells.size() == 3);
  CHECK(cells[0].count == 2);
  CHECK(cells[0].mean == 2.0);
}

TEST_CASE("success rates") {
  SuccessCriterion crit;
  CHECK(crit.threshold(FunctionId::Sphere) == 1e-3);
  CHECK(crit.threshold(FunctionId::Griewank) == 1e-2);
  CHECK(crit.threshold(FunctionId::RastriginF1) == 1e-1);
  CHECK(crit.threshold(FunctionId::Rosenbrock) == 50.0);
  CHECK(crit.accepts(FunctionId::RastriginF1, -299.95, -300.0));
  CHECK_FALSE(crit.accepts(FunctionId::RastriginF1, -299.8, -300.0));

  std::vector<RunRecord> runs;
  for (int i = 0; i < 10; ++i) runs.push_back(record(i < 7 ? 1e-4 : 1.0));
  auto rows = success_rate(runs, crit, FunctionId::Sphere, 0.0);
  REQUIRE(rows.size() == 1);
  CHECK(rows[0].percent == 70);
  CHECK(rows[0].successes == 7);

  std::vector<RunRecord> optimal(5, record(0.0));
  CHECK(success_rate(optimal, crit, FunctionId::Sphere, 0.0)[0].percent == 100);

  runs.push_back(record(0.0, 0.3));
  rows = success_rate(runs, crit, FunctionId::Sphere, 0.0);
  CHECK(rows.size() == 2);
  CHECK(rounded_percent(2, 3) == 67);
  CHECK(rounded_percent(0, 0) == 0);
}

TEST_CASE("csv: header, golden line, round trip") {
  CHECK(runs_to_csv({}) == std::string(kRunsCsvHeader) + "\n");
  CHECK(runs_from_csv(runs_to_csv({})).empty());

  RunRecord r;
  r.function = "griewank";
  r.dimension = 50;
  r.noisy = true;
  r.sigma = 0.1;
  r.algo = "dpsea";
  r.rs = 5;
  r.repeat = 7;
  r.seed = 18446744073709551615ULL;
  r.best_true_fitness = 0.0123;
  r.total_eval = 429910;
  r.success = false;
  r.wall_ms = 0.0;
  const std::string golden =
      "griewank,50,true,0.1,dpsea,5,7,18446744073709551615,0.0123,429910,false,0\n";
  CHECK(runs_to_csv({r}) == std::string(kRunsCsvHeader) + "\n" + golden);

  Rng rng(61);
  std::vector<RunRecord> many;
  for (int i = 0; i < 50; ++i) {
    auto x = record(std::exp(rng.uniform(-40, 5)), rng.uniform(0, 1), 1 + rng.uniform_index(100));
    x.seed = rng.engine()();
    x.wall_ms = rng.uniform(0, 1000);
    many.push_back(x);
  }
  CHECK(runs_from_csv(runs_to_csv(many)) == many);
  CHECK(runs_from_json(runs_to_json(many)) == many);
  CHECK_THROWS(runs_from_csv("bogus\n"));
}

TEST_CASE("emit and load") {
  const auto dir = scratch("emit");
  auto cfg = quick_config();
  std::vector<RunRecord> recs;
  for (const auto& o : run_experiment_serial(cfg)) recs.push_back(o.record);
  emit(recs, summarize(recs), OutputFormat::Csv, dir);
  CHECK(fs::exists(dir / "runs.csv"));
  CHECK(fs::exists(dir / "summary.csv"));
  CHECK(load_runs(dir) == recs);

  const auto jdir = scratch("emit_json");
  emit(recs, summarize(recs), OutputFormat::Json, jdir);
  CHECK(load_runs(jdir) == recs);
  fs::remove_all(dir);
  fs::remove_all(jdir);
}

TEST_CASE("unwritable output") {
  const auto blocker = scratch("blocker");
  { std::ofstream(blocker) << "x"; }
  const auto target = blocker / "sub";
  CHECK_THROWS_AS(emit({}, {}, OutputFormat::Csv, target), OutputError);
  CHECK_THROWS_AS(write_atomic(target / "runs.csv", "x"), OutputError);
  fs::remove(blocker);
}

TEST_CASE("cli exit codes and reruns") {
  const std::string cli = DPSEA_CLI_PATH;
  const auto dir = scratch("cli");
  const auto blocker = scratch("cli_blocker");
  { std::ofstream(blocker) << "x"; }
  auto run = [&](const std::string& args) {
    const int status = std::system((cli + " " + args + " > /dev/null 2>&1").c_str());
    return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  };
  const std::string common = "run --algo pso --function sphere --sigma 0.5 --repeats 2 --seed 5 ";
  CHECK(run(common + "--out " + (dir / "a").string()) == 0);
  CHECK(run(common + "--out " + (dir / "b").string()) == 0);
  CHECK(slurp(dir / "a" / "runs.csv") == slurp(dir / "b" / "runs.csv"));
  CHECK(fs::exists(dir / "a" / "experiment.json"));
  CHECK(run("summarize --in " + (dir / "a").string()) == 0);
  CHECK(run("success --in " + (dir / "a").string()) == 0);

  CHECK(run(common + "--out " + (blocker / "sub").string()) == 2);
  CHECK(run("run --function ackley --out " + (dir / "c").string()) == 1);
  CHECK(run("run --rs 0 --out " + (dir / "c").string()) == 1);
  CHECK(run("summarize --in " + (dir / "missing").string()) == 1);
  CHECK(run("bogus") == 1);
  fs::remove_all(dir);
  fs::remove(blocker);
}

}  // TEST_SUITE
