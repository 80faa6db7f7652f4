#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "wva/inference.hpp"
#include "wva/model.hpp"
#include "wva/random.hpp"

namespace wva {

struct SimulationOptions {
  /// Use the exact mean sin(Δθ) for the Gaussian readout instead of Δθ.
  bool exact_sine = false;
};

/// One M-photon experiment: Bernoulli(P) postselection per injected photon,
/// a phase readout D̃ per postselected photon (Gaussian at |α|² >= 50,
/// exact Skellam/|α|² below) and a technical-noise overlay.
/// Throws ZeroPostselections when no photon is postselected.
DataSet run_experiment(const ExperimentConfig& config, RandomStream& rng,
                       const SimulationOptions& options = {});

struct TrialRecord {
  std::uint64_t trial = 0;
  std::int64_t n_postselected = 0;
  double phi_hat = 0.0;  // NaN for failed trials
  bool failed = false;
};

struct TrialSummary {
  std::size_t n_trials = 0;
  double mean_estimate = 0.0;
  double var_estimate = 0.0;
  double fisher_analytic = 0.0;  // NaN when the configuration is degenerate
  double efficiency = 0.0;        // var_estimate · fisher_analytic
  double snr_empirical = 0.0;     // mean / √var
  double mean_postselected = 0.0;
  std::size_t failed_trials = 0;
  std::vector<TrialRecord> records;
};

/// Repeats run_experiment + mle_estimate. Trial t uses the stream
/// RandomStream::derived(seed, t), so results do not depend on `threads`
/// (0 = hardware concurrency). Zero-postselection trials are counted, not
/// resampled.
TrialSummary run_trials(const ExperimentConfig& config, std::size_t n_trials, std::uint64_t seed,
                        unsigned threads = 1, const SimulationOptions& options = {});

struct SweepSeries {
  std::string label;
  std::vector<double> values;
  std::optional<double> plateau;  // large-M limit, colored noise only
};

struct SweepResult {
  std::string axis_label;
  std::vector<double> axis;
  std::vector<SweepSeries> analytic;
  std::vector<double> numeric;     // empty unless requested
  std::vector<double> numeric_se;  // same length as numeric
  std::vector<std::string> warnings;
};

/// Weak-measurement Fisher information against P = δ² for each δ, plus the
/// no-postselection reference. With numeric_datasets > 0 a Monte-Carlo
/// estimate of the weak curve is added, point i using stream derived(seed, i).
SweepResult sweep_postselection(const ExperimentConfig& base, const std::vector<double>& delta_values,
                                std::size_t numeric_datasets = 0, std::uint64_t seed = 0);

/// Fisher information against M for each postselection probability (weak
/// mode, δ = √P) plus no postselection.
SweepResult sweep_photons(const ExperimentConfig& base, const std::vector<long long>& m_values,
                          const std::vector<double>& post_probs);

/// Fisher information for each noise model (rows: white, quantum, colored)
/// and measurement (columns: none, weak, strong with δ = φ/2). The colored
/// row holds its large-|α|²M limits.
struct Table1 {
  static constexpr std::array<NoiseRegime, 3> kRows = {
      NoiseRegime::White, NoiseRegime::PurelyQuantum, NoiseRegime::Colored};
  static constexpr std::array<MeasurementMode, 3> kColumns = {
      MeasurementMode::NoPostselection, MeasurementMode::WeakPostselection,
      MeasurementMode::StrongPostselection};
  std::array<std::array<double, 3>, 3> entries{};
};

Table1 table1(double alpha_sq, long long m_photons, double eta_sq, double delta_weak, double phi);

}  // namespace wva
