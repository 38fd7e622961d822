#include "dpsea/config.hpp"

#include <fstream>
#include <set>

namespace dpsea {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& ns) {
  if (!obj.is_object()) throw ConfigError("'" + ns + "' must be an object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown config key '" + (ns.empty() ? key : ns + "." + key) + "'");
    }
  }
}

template <typename T>
void read(const json& obj, const char* key, T& target) {
  if (const auto it = obj.find(key); it != obj.end()) target = it->get<T>();
}

template <typename T>
std::vector<T> read_list(const json& value) {
  if (value.is_array()) return value.get<std::vector<T>>();
  return {value.get<T>()};
}

void read_ga(const json& obj, GaParams& ga) {
  read(obj, "pop_size", ga.pop_size);
  read(obj, "p_c", ga.p_c);
  read(obj, "p_m", ga.p_m);
  read(obj, "n_elites", ga.n_elites);
  read(obj, "sigma_m", ga.sigma_m);
}

const std::set<std::string> kGaKeys{"pop_size", "p_c", "p_m", "n_elites", "sigma_m"};

json ga_json(const GaParams& ga) {
  return {{"pop_size", ga.pop_size},
          {"p_c", ga.p_c},
          {"p_m", ga.p_m},
          {"n_elites", ga.n_elites},
          {"sigma_m", ga.sigma_m}};
}

}  // namespace

ExperimentConfig config_from_json(const json& tree) {
  ExperimentConfig cfg;
  try {
    reject_unknown(tree,
                   {"function", "dimension", "rastrigin_constant", "noisy", "mu", "sigma", "algo",
                    "rs", "mode", "repeats", "seed", "total_eval", "out", "format", "timing",
                    "trace", "dpsea", "cga", "de", "pso", "regression", "success"},
                   "");
    if (tree.contains("function")) cfg.function = parse_function_id(tree["function"].get<std::string>());
    read(tree, "dimension", cfg.dimension);
    if (tree.contains("rastrigin_constant")) cfg.rastrigin_constant = tree["rastrigin_constant"].get<double>();
    read(tree, "noisy", cfg.noisy);
    read(tree, "mu", cfg.mu);
    if (tree.contains("sigma")) cfg.sigmas = read_list<double>(tree["sigma"]);
    if (tree.contains("algo")) cfg.algo = parse_algo(tree["algo"].get<std::string>());
    if (tree.contains("rs")) cfg.rs = read_list<std::size_t>(tree["rs"]);
    if (tree.contains("mode")) {
      const auto mode = tree["mode"].get<std::string>();
      if (mode == "success") cfg.mode = RepeatMode::Success;
      else if (mode == "stats") cfg.mode = RepeatMode::Stats;
      else throw ConfigError("mode must be 'success' or 'stats'");
    }
    if (tree.contains("repeats")) cfg.repeats = tree["repeats"].get<std::size_t>();
    if (tree.contains("seed")) cfg.seed = tree["seed"].get<std::uint64_t>();
    if (tree.contains("total_eval")) cfg.total_eval = tree["total_eval"].get<std::uint64_t>();
    if (tree.contains("out")) cfg.out_dir = tree["out"].get<std::string>();
    if (tree.contains("format")) cfg.format = parse_format(tree["format"].get<std::string>());
    read(tree, "timing", cfg.timing);
    read(tree, "trace", cfg.trace);

    if (tree.contains("dpsea")) {
      const auto& d = tree["dpsea"];
      std::set<std::string> keys{"t_switch", "max_clusters", "radius_fraction", "kappa",
                                 "s_min", "staleness_limit", "parallel_clusters"};
      keys.insert(kGaKeys.begin(), kGaKeys.end());
      reject_unknown(d, keys, "dpsea");
      read_ga(d, cfg.dpsea.ga);
      read(d, "t_switch", cfg.dpsea.t_switch);
      read(d, "max_clusters", cfg.dpsea.max_clusters);
      read(d, "radius_fraction", cfg.dpsea.radius_fraction);
      read(d, "kappa", cfg.dpsea.kappa);
      read(d, "s_min", cfg.dpsea.s_min);
      read(d, "staleness_limit", cfg.dpsea.staleness_limit);
      read(d, "parallel_clusters", cfg.dpsea.parallel_clusters);
    }
    if (tree.contains("regression")) {
      const auto& r = tree["regression"];
      reject_unknown(r, {"lambda", "quadratic_min_samples_factor"}, "regression");
      read(r, "lambda", cfg.dpsea.lambda);
      read(r, "quadratic_min_samples_factor", cfg.dpsea.quadratic_factor);
    }
    if (tree.contains("cga")) {
      reject_unknown(tree["cga"], kGaKeys, "cga");
      read_ga(tree["cga"], cfg.cga.ga);
    }
    if (tree.contains("de")) {
      const auto& d = tree["de"];
      reject_unknown(d, {"pop_size", "cf", "f_scale"}, "de");
      read(d, "pop_size", cfg.de.pop_size);
      read(d, "cf", cfg.de.cf);
      read(d, "f_scale", cfg.de.f_scale);
    }
    if (tree.contains("pso")) {
      const auto& p = tree["pso"];
      reject_unknown(p, {"pop_size", "w_start", "w_end", "phi_min", "phi_max"}, "pso");
      read(p, "pop_size", cfg.pso.pop_size);
      read(p, "w_start", cfg.pso.w_start);
      read(p, "w_end", cfg.pso.w_end);
      read(p, "phi_min", cfg.pso.phi_min);
      read(p, "phi_max", cfg.pso.phi_max);
    }
    if (tree.contains("success")) {
      const auto& s = tree["success"];
      reject_unknown(s, {"epsilon"}, "success");
      if (s.contains("epsilon")) {
        const auto& eps = s["epsilon"];
        reject_unknown(eps, {"sphere", "griewank", "rastrigin1", "rosenbrock"}, "success.epsilon");
        for (const auto& [name, value] : eps.items()) {
          cfg.success.epsilon[parse_function_id(name)] = value.get<double>();
        }
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  return cfg;
}

ExperimentConfig load_config_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  json tree;
  try {
    tree = json::parse(in);
  } catch (const json::exception& e) {
    throw ConfigError("config " + path.string() + ": " + e.what());
  }
  return config_from_json(tree);
}

json config_to_json(const ExperimentConfig& cfg) {
  const BenchmarkFunction fn = cfg.benchmark();
  json eps = json::object();
  for (const auto& [id, value] : cfg.success.epsilon) eps[std::string(to_string(id))] = value;
  json dp = ga_json(cfg.dpsea.ga);
  dp["t_switch"] = cfg.dpsea.t_switch;
  dp["max_clusters"] = cfg.dpsea.max_clusters;
  dp["radius_fraction"] = cfg.dpsea.radius_fraction;
  dp["kappa"] = cfg.dpsea.kappa;
  dp["s_min"] = cfg.dpsea.s_min;
  dp["staleness_limit"] = cfg.dpsea.staleness_limit;
  dp["parallel_clusters"] = cfg.dpsea.parallel_clusters;

  json out = {
      {"function", std::string(to_string(cfg.function))},
      {"dimension", fn.dimension},
      {"rastrigin_constant", fn.rastrigin_constant},
      {"noisy", cfg.noisy},
      {"mu", cfg.mu},
      {"sigma", cfg.sigmas},
      {"algo", std::string(to_string(cfg.algo))},
      {"rs", cfg.rs},
      {"mode", cfg.mode == RepeatMode::Success ? "success" : "stats"},
      {"repeats", cfg.repeat_count()},
      {"total_eval", cfg.eval_budget()},
      {"out", cfg.out_dir.string()},
      {"format", std::string(to_string(cfg.format))},
      {"timing", cfg.timing},
      {"trace", cfg.trace},
      {"dpsea", dp},
      {"regression",
       {{"lambda", cfg.dpsea.lambda}, {"quadratic_min_samples_factor", cfg.dpsea.quadratic_factor}}},
      {"cga", ga_json(cfg.cga.ga)},
      {"de", {{"pop_size", cfg.de.pop_size}, {"cf", cfg.de.cf}, {"f_scale", cfg.de.f_scale}}},
      {"pso",
       {{"pop_size", cfg.pso.pop_size},
        {"w_start", cfg.pso.w_start},
        {"w_end", cfg.pso.w_end},
        {"phi_min", cfg.pso.phi_min},
        {"phi_max", cfg.pso.phi_max}}},
      {"success", {{"epsilon", eps}}},
  };
  if (cfg.seed) out["seed"] = *cfg.seed;
  return out;
}

}  // namespace dpsea
