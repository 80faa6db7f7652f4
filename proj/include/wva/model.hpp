#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace wva {

inline constexpr double kHbar = 1.054571817e-34;  // J·s

/// Physical constants of the optomechanical cavity. All fields must be > 0.
struct PhysicalParams {
  double omega_cav = 0.0;      // rad/s
  double cavity_length = 0.0;  // m
  double mech_mass = 0.0;      // kg
  double omega_m = 0.0;        // rad/s
  double hbar = kHbar;
};

enum class NoiseRegime { White, Colored, PurelyQuantum, Exponential };
enum class MeasurementMode { NoPostselection, WeakPostselection, StrongPostselection };
enum class Regime { Weak, Strong, Intermediate, NoPostselection };

/// How technical-noise correlations are indexed along a run.
///   Postselected: |i - j| counts postselected events (default).
///   InjectionSlot: |i - j| counts injected photons between the two events.
enum class NoiseIndexing { Postselected, InjectionSlot };

std::string_view to_string(NoiseRegime r);
std::string_view to_string(MeasurementMode m);
std::string_view to_string(Regime r);
std::string_view to_string(NoiseIndexing i);

/// Parameters of one estimation run.
struct ExperimentConfig {
  double phi = 1e-3;            // φ = g0 / ω_m
  double delta = 0.1;           // PDBS imbalance, |δ| <= 1/√2
  double alpha_sq = 100.0;      // |α|², mean photon number of the probe beam
  long long m_photons = 1000;   // injected single photons M
  double gamma_rate = 1e6;      // injection rate Γ (1/s)
  double tau_corr = 0.0;        // correlation time τ (s)
  double eta_sq = 0.05;         // technical-noise strength η̃²
  NoiseRegime noise_regime = NoiseRegime::Colored;
  MeasurementMode measurement_mode = MeasurementMode::WeakPostselection;
  NoiseIndexing noise_indexing = NoiseIndexing::Postselected;
};

/// Throws DomainError when any range check fails.
void validate(const ExperimentConfig& config);

/// Non-fatal diagnostics for a valid configuration (e.g. large φ).
std::vector<std::string> config_warnings(const ExperimentConfig& config);

/// η̃² actually in effect: zero for PurelyQuantum regardless of the stored value.
double effective_eta_sq(const ExperimentConfig& config);

struct PostselectionStats {
  double prob = 0.0;
  double amp_factor = 1.0;
  Regime regime = Regime::NoPostselection;
};

inline constexpr double kDefaultWeakRatio = 100.0;

/// P = δ² + φ²/4.
double postselection_probability(double delta, double phi);

/// f = -δ√(1-δ²) / (2P). Throws DegenerateError when P = 0.
double amplification_factor(double delta, double phi);

/// N_w = -√(1-δ²) / (2δ), the φ → 0 limit of the amplification factor.
double weak_value(double delta);

/// Weak when δ² >= ratio·φ², Strong when |δ| lies within 10% of φ of φ/2,
/// Intermediate otherwise.
Regime classify_regime(double delta, double phi, double weak_ratio_threshold = kDefaultWeakRatio);

/// P, f and regime for a configuration. NoPostselection gives P = 1, f = 1.
PostselectionStats postselection_stats(const ExperimentConfig& config,
                                       double weak_ratio_threshold = kDefaultWeakRatio);

/// Amplification factor treated as a known calibration constant by the
/// estimator and the data model: 1 without postselection, N_w(δ) in weak
/// mode, f(δ, φ) in strong mode.
double calibration_factor(const ExperimentConfig& config);

/// Probability that one injected photon triggers a phase measurement.
double trigger_probability(const ExperimentConfig& config);

/// g0 = (ω_cav / L) √(ħ / (2 ω_m M)).
double g0_from_physical(const PhysicalParams& params);

/// Inverse of g0_from_physical with φ = g0/ω_m: M = ħ ω_cav² / (2 L² ω_m³ φ²).
double mass_from_phi(double phi_hat, double omega_cav, double cavity_length, double omega_m,
                     double hbar = kHbar);

}  // namespace wva
