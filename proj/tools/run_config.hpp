#pragma once

#include <cstdint>
#include <string>

#include "json.hpp"

#include "wva/model.hpp"

namespace wva::cli {

/// Contents of a run configuration file: a flat JSON object with the keys
///   phi, delta, alpha_sq, m_photons, gamma_rate, tau_corr, eta_sq,
///   noise ("white" | "colored" | "quantum" | "exponential"),
///   measurement ("none" | "weak" | "strong"),
///   indexing ("postselected" | "slot"), seed, trials.
/// Every key is optional; unknown keys are an error.
struct RunConfig {
  ExperimentConfig experiment;
  std::uint64_t seed = 0;
  std::size_t trials = 1000;
};

NoiseRegime parse_noise(const std::string& name);
MeasurementMode parse_measurement(const std::string& name);
NoiseIndexing parse_indexing(const std::string& name);

/// Applies the keys of `doc` on top of `base`. Throws ConfigError naming the
/// offending key.
RunConfig apply_json(const nlohmann::json& doc, RunConfig base = {});

RunConfig load_run_config(const std::string& path);

nlohmann::json to_json(const RunConfig& config);

}  // namespace wva::cli
