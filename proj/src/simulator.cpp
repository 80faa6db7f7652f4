#include "wva/simulator.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <mutex>
#include <thread>

#include "wva/errors.hpp"
#include "wva/noise.hpp"
#include "wva/photostats.hpp"
#include "wva/summation.hpp"

namespace wva {

DataSet run_experiment(const ExperimentConfig& config, RandomStream& rng,
                       const SimulationOptions& options) {
  validate(config);
  const double p = trigger_probability(config);
  const double f = calibration_factor(config);
  const auto m = static_cast<std::uint64_t>(config.m_photons);

  DataSet data;
  data.config = config;
  if (p >= 1.0) {
    data.slots.resize(m);
    for (std::uint64_t i = 0; i < m; ++i) data.slots[i] = i;
  } else {
    // Geometric gaps between successes are equivalent in law to one
    // Bernoulli(P) draw per injected photon.
    std::uint64_t next = 0;
    for (;;) {
      const std::int64_t gap = rng.geometric_failures(p);
      if (gap < 0) break;
      const auto slot = next + static_cast<std::uint64_t>(gap);
      if (slot >= m || slot < next) break;
      data.slots.push_back(slot);
      next = slot + 1;
    }
  }
  if (data.slots.empty()) {
    throw ZeroPostselections();
  }

  const double delta_theta = f * config.phi;
  data.samples.resize(data.slots.size());
  if (config.alpha_sq >= kGaussianThreshold) {
    const double mean = options.exact_sine ? std::sin(delta_theta) : delta_theta;
    for (auto& s : data.samples) s = sample_dtilde_gaussian(rng, config.alpha_sq, mean);
  } else {
    for (auto& s : data.samples) {
      s = static_cast<double>(sample_d(rng, config.alpha_sq, delta_theta)) / config.alpha_sq;
    }
  }

  const NoiseModel model = noise_model(config);
  const std::vector<double> noise = config.noise_indexing == NoiseIndexing::InjectionSlot
                                        ? sample_noise_at(rng, data.slots, model)
                                        : sample_noise(rng, data.samples.size(), model);
  for (std::size_t i = 0; i < noise.size(); ++i) data.samples[i] += noise[i];
  return data;
}

TrialSummary run_trials(const ExperimentConfig& config, std::size_t n_trials, std::uint64_t seed,
                        unsigned threads, const SimulationOptions& options) {
  validate(config);
  if (n_trials < 2) {
    throw DomainError("run_trials needs at least two trials");
  }
  std::vector<TrialRecord> records(n_trials);
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&] {
    for (;;) {
      const std::size_t t = next.fetch_add(1);
      if (t >= n_trials) return;
      TrialRecord& rec = records[t];
      rec.trial = t;
      try {
        RandomStream rng = RandomStream::derived(seed, t);
        const DataSet data = run_experiment(config, rng, options);
        rec.n_postselected = static_cast<std::int64_t>(data.samples.size());
        rec.phi_hat = mle_estimate(data);
      } catch (const ZeroPostselections&) {
        rec.failed = true;
        rec.n_postselected = 0;
        rec.phi_hat = std::numeric_limits<double>::quiet_NaN();
      } catch (...) {
        const std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(n_trials);
        return;
      }
    }
  };

  unsigned n_threads = threads == 0 ? std::max(1u, std::thread::hardware_concurrency()) : threads;
  n_threads = static_cast<unsigned>(std::min<std::size_t>(n_threads, n_trials));
  if (n_threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(n_threads);
    for (unsigned i = 0; i < n_threads; ++i) pool.emplace_back(worker);
  }
  if (error) std::rethrow_exception(error);

  // Reduction in trial order keeps the summary independent of scheduling.
  TrialSummary summary;
  summary.n_trials = n_trials;
  CompensatedSum sum_hat;
  CompensatedSum sum_n;
  std::size_t ok = 0;
  for (const auto& rec : records) {
    sum_n.add(static_cast<double>(rec.n_postselected));
    if (rec.failed) {
      ++summary.failed_trials;
      continue;
    }
    sum_hat.add(rec.phi_hat);
    ++ok;
  }
  if (ok == 0) {
    throw AllTrialsFailed();
  }
  summary.mean_postselected = sum_n.value() / static_cast<double>(n_trials);
  summary.mean_estimate = sum_hat.value() / static_cast<double>(ok);
  CompensatedSum sum_sq;
  for (const auto& rec : records) {
    if (rec.failed) continue;
    const double d = rec.phi_hat - summary.mean_estimate;
    sum_sq.add(d * d);
  }
  summary.var_estimate = ok > 1 ? sum_sq.value() / static_cast<double>(ok - 1) : 0.0;
  try {
    summary.fisher_analytic = fisher_analytic(config).analytic;
  } catch (const DegenerateError&) {
    summary.fisher_analytic = std::numeric_limits<double>::quiet_NaN();
  }
  summary.efficiency = summary.var_estimate * summary.fisher_analytic;
  summary.snr_empirical = summary.mean_estimate / std::sqrt(summary.var_estimate);
  summary.records = std::move(records);
  return summary;
}

SweepResult sweep_postselection(const ExperimentConfig& base, const std::vector<double>& delta_values,
                                std::size_t numeric_datasets, std::uint64_t seed) {
  validate(base);
  if (delta_values.empty()) {
    throw DomainError("sweep needs at least one delta value");
  }
  SweepResult result;
  result.axis_label = "P";
  SweepSeries weak{"fisher_weak", {}, std::nullopt};
  SweepSeries nops{"fisher_nops", {}, std::nullopt};

  ExperimentConfig nops_config = base;
  nops_config.measurement_mode = MeasurementMode::NoPostselection;
  const double nops_value = fisher_analytic(nops_config).analytic;

  for (std::size_t i = 0; i < delta_values.size(); ++i) {
    ExperimentConfig cfg = base;
    cfg.delta = delta_values[i];
    cfg.measurement_mode = MeasurementMode::WeakPostselection;
    validate(cfg);
    if (classify_regime(cfg.delta, cfg.phi) != Regime::Weak) {
      result.warnings.push_back("delta=" + std::to_string(cfg.delta) +
                                " is outside the weak regime (delta^2 < 100 phi^2)");
    }
    result.axis.push_back(cfg.delta * cfg.delta);
    weak.values.push_back(fisher_weak_curve(cfg));
    nops.values.push_back(nops_value);
    if (numeric_datasets > 0) {
      RandomStream rng = RandomStream::derived(seed, i);
      const FisherReport rep = fisher_numeric(cfg, numeric_datasets, rng);
      result.numeric.push_back(*rep.numeric);
      result.numeric_se.push_back(*rep.numeric_se);
    }
  }
  result.analytic = {std::move(weak), std::move(nops)};
  return result;
}

SweepResult sweep_photons(const ExperimentConfig& base, const std::vector<long long>& m_values,
                          const std::vector<double>& post_probs) {
  validate(base);
  if (m_values.empty()) {
    throw DomainError("sweep needs at least one photon count");
  }
  SweepResult result;
  result.axis_label = "m";
  for (long long m : m_values) result.axis.push_back(static_cast<double>(m));

  const double eta = effective_eta_sq(base);
  const bool colored = base.noise_regime == NoiseRegime::Colored && eta > 0.0;
  for (std::size_t j = 0; j < post_probs.size(); ++j) {
    const double prob = post_probs[j];
    if (!(prob > 0.0 && prob <= 0.5)) {
      throw DomainError("postselection probability must lie in (0, 0.5]");
    }
    SweepSeries series{"fisher_p" + std::to_string(j + 1), {}, std::nullopt};
    if (colored) series.plateau = 1.0 / (4.0 * prob * eta);
    ExperimentConfig cfg = base;
    cfg.delta = std::sqrt(prob);
    cfg.measurement_mode = MeasurementMode::WeakPostselection;
    if (classify_regime(cfg.delta, cfg.phi) != Regime::Weak) {
      result.warnings.push_back("P=" + std::to_string(prob) + " is outside the weak regime");
    }
    for (long long m : m_values) {
      cfg.m_photons = m;
      series.values.push_back(fisher_weak_curve(cfg));
    }
    result.analytic.push_back(std::move(series));
  }
  SweepSeries nops{"fisher_nops", {}, std::nullopt};
  if (colored) nops.plateau = 1.0 / eta;
  ExperimentConfig cfg = base;
  cfg.measurement_mode = MeasurementMode::NoPostselection;
  for (long long m : m_values) {
    cfg.m_photons = m;
    nops.values.push_back(fisher_analytic(cfg).analytic);
  }
  result.analytic.push_back(std::move(nops));
  return result;
}

Table1 table1(double alpha_sq, long long m_photons, double eta_sq, double delta_weak, double phi) {
  ExperimentConfig cfg;
  cfg.alpha_sq = alpha_sq;
  cfg.m_photons = m_photons;
  cfg.eta_sq = eta_sq;
  cfg.delta = delta_weak;
  cfg.phi = phi;
  validate(cfg);
  if (delta_weak == 0.0 || phi == 0.0) {
    throw DomainError("table1 needs delta_weak != 0 and phi > 0");
  }
  const double resources = alpha_sq * static_cast<double>(m_photons);
  const double white = resources / (1.0 + alpha_sq * eta_sq);
  const double inf = std::numeric_limits<double>::infinity();
  const double colored = eta_sq > 0.0 ? 1.0 / eta_sq : inf;

  Table1 table;
  table.entries[0] = {white, white / 4.0, white / 8.0};
  table.entries[1] = {resources, resources / 4.0, resources / 8.0};
  table.entries[2] = {colored, colored / (4.0 * delta_weak * delta_weak),
                      colored / (4.0 * phi * phi)};
  return table;
}

}  // namespace wva
