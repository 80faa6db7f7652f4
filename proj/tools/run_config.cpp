#include "run_config.hpp"

#include <fstream>
#include <functional>
#include <map>

#include "wva/errors.hpp"

namespace wva::cli {

namespace {

using json = nlohmann::json;

double get_number(const json& value, const std::string& key) {
  if (!value.is_number()) {
    throw ConfigError("config key '" + key + "' must be a number");
  }
  return value.get<double>();
}

long long get_integer(const json& value, const std::string& key) {
  if (!value.is_number_integer()) {
    throw ConfigError("config key '" + key + "' must be an integer");
  }
  return value.get<long long>();
}

std::string get_string(const json& value, const std::string& key) {
  if (!value.is_string()) {
    throw ConfigError("config key '" + key + "' must be a string");
  }
  return value.get<std::string>();
}

}  // namespace

NoiseRegime parse_noise(const std::string& name) {
  if (name == "white") return NoiseRegime::White;
  if (name == "colored") return NoiseRegime::Colored;
  if (name == "quantum") return NoiseRegime::PurelyQuantum;
  if (name == "exponential") return NoiseRegime::Exponential;
  throw ConfigError("unknown noise model '" + name + "' (white|colored|quantum|exponential)");
}

MeasurementMode parse_measurement(const std::string& name) {
  if (name == "none") return MeasurementMode::NoPostselection;
  if (name == "weak") return MeasurementMode::WeakPostselection;
  if (name == "strong") return MeasurementMode::StrongPostselection;
  throw ConfigError("unknown measurement '" + name + "' (none|weak|strong)");
}

NoiseIndexing parse_indexing(const std::string& name) {
  if (name == "postselected") return NoiseIndexing::Postselected;
  if (name == "slot") return NoiseIndexing::InjectionSlot;
  throw ConfigError("unknown indexing '" + name + "' (postselected|slot)");
}

RunConfig apply_json(const json& doc, RunConfig base) {
  if (!doc.is_object()) {
    throw ConfigError("configuration must be a JSON object");
  }
  using Setter = std::function<void(RunConfig&, const json&, const std::string&)>;
  static const std::map<std::string, Setter> setters = {
      {"phi", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.phi = get_number(v, k); }},
      {"delta", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.delta = get_number(v, k); }},
      {"alpha_sq", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.alpha_sq = get_number(v, k); }},
      {"m_photons", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.m_photons = get_integer(v, k); }},
      {"gamma_rate", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.gamma_rate = get_number(v, k); }},
      {"tau_corr", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.tau_corr = get_number(v, k); }},
      {"eta_sq", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.eta_sq = get_number(v, k); }},
      {"noise", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.noise_regime = parse_noise(get_string(v, k)); }},
      {"measurement", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.measurement_mode = parse_measurement(get_string(v, k)); }},
      {"indexing", [](RunConfig& c, const json& v, const std::string& k) { c.experiment.noise_indexing = parse_indexing(get_string(v, k)); }},
      {"seed", [](RunConfig& c, const json& v, const std::string& k) {
         if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0)) {
           throw ConfigError("config key '" + k + "' must be a nonnegative integer");
         }
         c.seed = v.get<std::uint64_t>();
       }},
      {"trials", [](RunConfig& c, const json& v, const std::string& k) {
         const long long n = get_integer(v, k);
         if (n < 2) throw ConfigError("config key '" + k + "' must be >= 2");
         c.trials = static_cast<std::size_t>(n);
       }},
  };
  for (const auto& [key, value] : doc.items()) {
    const auto it = setters.find(key);
    if (it == setters.end()) {
      throw ConfigError("unknown config key '" + key + "'");
    }
    it->second(base, value, key);
  }
  return base;
}

RunConfig load_run_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) {
    throw ConfigError("cannot open config file '" + path + "'");
  }
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("config file '" + path + "' is not valid JSON: " + e.what());
  }
  return apply_json(doc);
}

nlohmann::json to_json(const RunConfig& config) {
  const ExperimentConfig& e = config.experiment;
  return {{"phi", e.phi},
          {"delta", e.delta},
          {"alpha_sq", e.alpha_sq},
          {"m_photons", e.m_photons},
          {"gamma_rate", e.gamma_rate},
          {"tau_corr", e.tau_corr},
          {"eta_sq", e.eta_sq},
          {"noise", std::string(to_string(e.noise_regime))},
          {"measurement", std::string(to_string(e.measurement_mode))},
          {"indexing", std::string(to_string(e.noise_indexing))},
          {"seed", config.seed},
          {"trials", config.trials}};
}

}  // namespace wva::cli
