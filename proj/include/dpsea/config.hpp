#pragma once

#include <filesystem>

#include "dpsea/harness.hpp"
#include "json.hpp"

namespace dpsea {

/// Reads an experiment from a JSON tree. Top-level keys: function, dimension,
/// rastrigin_constant, noisy, mu, sigma, algo, rs, mode, repeats, seed,
/// total_eval, out, format, timing, trace. Namespaced keys live in nested
/// objects: dpsea.*, cga.*, de.*, pso.*, regression.{lambda,
/// quadratic_min_samples_factor}, success.epsilon.<function>. Unknown keys
/// are rejected. Throws ConfigError.
ExperimentConfig config_from_json(const nlohmann::json& tree);

ExperimentConfig load_config_file(const std::filesystem::path& path);

/// Full echo of a resolved configuration, in the same schema.
nlohmann::json config_to_json(const ExperimentConfig& cfg);

}  // namespace dpsea
