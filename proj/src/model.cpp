#include "wva/model.hpp"

#include <cmath>
#include <sstream>

#include "wva/errors.hpp"

namespace wva {

namespace {

// |δ| <= 1/√2 up to rounding of the bound itself.
constexpr double kDeltaBound = 0.70710678118654752440 * (1.0 + 4e-16);

void check_delta(double delta) {
  if (!std::isfinite(delta) || std::abs(delta) > kDeltaBound) {
    std::ostringstream msg;
    msg << "delta must satisfy |delta| <= 1/sqrt(2), got " << delta;
    throw DomainError(msg.str());
  }
}

void check_phi(double phi) {
  if (!std::isfinite(phi) || phi < 0.0) {
    std::ostringstream msg;
    msg << "phi must be finite and >= 0, got " << phi;
    throw DomainError(msg.str());
  }
}

void check_positive(double value, const char* name) {
  if (!std::isfinite(value) || value <= 0.0) {
    std::ostringstream msg;
    msg << name << " must be finite and > 0, got " << value;
    throw DomainError(msg.str());
  }
}

}  // namespace

std::string_view to_string(NoiseRegime r) {
  switch (r) {
    case NoiseRegime::White: return "white";
    case NoiseRegime::Colored: return "colored";
    case NoiseRegime::PurelyQuantum: return "quantum";
    case NoiseRegime::Exponential: return "exponential";
  }
  return "unknown";
}

std::string_view to_string(MeasurementMode m) {
  switch (m) {
    case MeasurementMode::NoPostselection: return "none";
    case MeasurementMode::WeakPostselection: return "weak";
    case MeasurementMode::StrongPostselection: return "strong";
  }
  return "unknown";
}

std::string_view to_string(Regime r) {
  switch (r) {
    case Regime::Weak: return "weak";
    case Regime::Strong: return "strong";
    case Regime::Intermediate: return "intermediate";
    case Regime::NoPostselection: return "none";
  }
  return "unknown";
}

std::string_view to_string(NoiseIndexing i) {
  switch (i) {
    case NoiseIndexing::Postselected: return "postselected";
    case NoiseIndexing::InjectionSlot: return "slot";
  }
  return "unknown";
}

void validate(const ExperimentConfig& config) {
  check_phi(config.phi);
  check_delta(config.delta);
  check_positive(config.alpha_sq, "alpha_sq");
  check_positive(config.gamma_rate, "gamma_rate");
  if (config.m_photons < 1) {
    throw DomainError("m_photons must be >= 1, got " + std::to_string(config.m_photons));
  }
  if (!std::isfinite(config.tau_corr) || config.tau_corr < 0.0) {
    throw DomainError("tau_corr must be finite and >= 0");
  }
  if (!std::isfinite(config.eta_sq) || config.eta_sq < 0.0) {
    throw DomainError("eta_sq must be finite and >= 0");
  }
}

std::vector<std::string> config_warnings(const ExperimentConfig& config) {
  std::vector<std::string> out;
  if (config.phi > 0.1) {
    out.emplace_back("phi > 0.1: small-angle analytics lose accuracy");
  }
  if (config.measurement_mode == MeasurementMode::WeakPostselection &&
      classify_regime(config.delta, config.phi) != Regime::Weak) {
    out.emplace_back("weak postselection requested but delta^2 < 100 phi^2");
  }
  return out;
}

double effective_eta_sq(const ExperimentConfig& config) {
  return config.noise_regime == NoiseRegime::PurelyQuantum ? 0.0 : config.eta_sq;
}

double postselection_probability(double delta, double phi) {
  check_delta(delta);
  check_phi(phi);
  return delta * delta + 0.25 * phi * phi;
}

double amplification_factor(double delta, double phi) {
  const double prob = postselection_probability(delta, phi);
  if (prob == 0.0) {
    throw DegenerateError("amplification factor undefined at delta = phi = 0");
  }
  return -delta * std::sqrt(1.0 - delta * delta) / (2.0 * prob);
}

double weak_value(double delta) {
  check_delta(delta);
  if (delta == 0.0) {
    throw DomainError("weak value undefined at delta = 0");
  }
  return -std::sqrt(1.0 - delta * delta) / (2.0 * delta);
}

Regime classify_regime(double delta, double phi, double weak_ratio_threshold) {
  const double d = std::abs(delta);
  if (d * d >= weak_ratio_threshold * phi * phi) {
    return Regime::Weak;
  }
  if (std::abs(d - 0.5 * phi) <= 0.1 * phi) {
    return Regime::Strong;
  }
  return Regime::Intermediate;
}

PostselectionStats postselection_stats(const ExperimentConfig& config,
                                       double weak_ratio_threshold) {
  if (config.measurement_mode == MeasurementMode::NoPostselection) {
    return {1.0, 1.0, Regime::NoPostselection};
  }
  PostselectionStats stats;
  stats.prob = postselection_probability(config.delta, config.phi);
  stats.amp_factor = amplification_factor(config.delta, config.phi);
  stats.regime = classify_regime(config.delta, config.phi, weak_ratio_threshold);
  return stats;
}

double calibration_factor(const ExperimentConfig& config) {
  switch (config.measurement_mode) {
    case MeasurementMode::NoPostselection: return 1.0;
    case MeasurementMode::WeakPostselection: return weak_value(config.delta);
    case MeasurementMode::StrongPostselection:
      return amplification_factor(config.delta, config.phi);
  }
  return 1.0;
}

double trigger_probability(const ExperimentConfig& config) {
  if (config.measurement_mode == MeasurementMode::NoPostselection) {
    return 1.0;
  }
  return postselection_probability(config.delta, config.phi);
}

double g0_from_physical(const PhysicalParams& params) {
  check_positive(params.omega_cav, "omega_cav");
  check_positive(params.cavity_length, "cavity_length");
  check_positive(params.mech_mass, "mech_mass");
  check_positive(params.omega_m, "omega_m");
  check_positive(params.hbar, "hbar");
  return (params.omega_cav / params.cavity_length) *
         std::sqrt(params.hbar / (2.0 * params.omega_m * params.mech_mass));
}

double mass_from_phi(double phi_hat, double omega_cav, double cavity_length, double omega_m,
                     double hbar) {
  check_positive(phi_hat, "phi_hat");
  check_positive(omega_cav, "omega_cav");
  check_positive(cavity_length, "cavity_length");
  check_positive(omega_m, "omega_m");
  // Grouped as ratios so no intermediate leaves double range.
  const double cav_ratio = omega_cav / (cavity_length * omega_m);
  const double scale = cav_ratio / phi_hat;
  return hbar * scale * scale / (2.0 * omega_m);
}

}  // namespace wva
