#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "wva/model.hpp"
#include "wva/noise.hpp"
#include "wva/random.hpp"

namespace wva {

/// The N postselected, normalized difference counts of one experiment.
struct DataSet {
  std::vector<double> samples;      // s_i
  std::vector<std::uint64_t> slots;  // injection slot of each sample (may be empty)
  ExperimentConfig config;
};

/// Throws DomainError unless 1 <= N <= M and slots (if present) match N.
void validate(const DataSet& data);

struct FisherReport {
  double analytic = 0.0;
  std::optional<double> numeric;
  std::optional<double> numeric_se;
  MeasurementMode regime = MeasurementMode::NoPostselection;
  NoiseRegime noise_kind = NoiseRegime::White;
  double crlb = 0.0;  // 1 / analytic
};

/// C⁻¹ queries for the layout of `data`, honoring the configured noise indexing.
Precision precision_for(const DataSet& data);

/// Multivariate-normal log-likelihood with mean μ_i = f·φ, f the
/// calibration factor of the data's configuration.
double log_likelihood(const DataSet& data, double phi);

/// ∂/∂φ log_likelihood = ½ Σ_ij C⁻¹_ij [f(s_i + s_j) - 2f²φ].
double score(const DataSet& data, double phi);

/// Expected number of triggered measurements P·M (M without postselection).
double expected_data_count(const ExperimentConfig& config);

/// Closed-form Fisher information of φ.
///   none:   f = 1, N = M
///   weak:   f² = 1/(4δ²), N = δ²M   (weak-regime limit)
///   strong: f = -δ√(1-δ²)/(2P), N = P·M
/// combined with Σ C⁻¹ for the noise kind: N|α|²/(1+|α|²η̃²) when
/// uncorrelated, N|α|²/(1+N|α|²η̃²) when colored, Cholesky for exponential.
/// Throws DegenerateError when the expected data count P·M is below one.
FisherReport fisher_analytic(const ExperimentConfig& config);

/// Weak-limit curve (1/(4δ²))·ΣC⁻¹ at the continuous count δ²M, defined for
/// any M. Sweeps use it so that points with δ²M < 1 stay on the curve.
double fisher_weak_curve(const ExperimentConfig& config);

/// Fisher information of the full postselection formula (exact f and
/// N = P·M) for any postselected mode.
double fisher_postselected(const ExperimentConfig& config);

/// Monte-Carlo E[score²] at the true φ over synthetic datasets drawn from the
/// simulator's data law. Fills both analytic and numeric parts.
FisherReport fisher_numeric(const ExperimentConfig& config, std::size_t n_datasets,
                            RandomStream& rng);

/// φ̂ = (1/f) · mean(s). Throws DomainError when f = 0.
double mle_estimate(const DataSet& data);

struct EstimatorStats {
  double std_dev = 0.0;
  double snr = 0.0;
};

/// Cramér-Rao standard deviation 1/√I and SNR φ/σ.
EstimatorStats estimator_stats(const ExperimentConfig& config);

}  // namespace wva
