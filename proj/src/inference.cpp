#include "wva/inference.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "wva/errors.hpp"
#include "wva/simulator.hpp"
#include "wva/summation.hpp"

namespace wva {

namespace {

// Σ_ij C⁻¹_ij for `count` data points; count may be fractional for the
// closed-form kinds (expected counts P·M).
double precision_total(const ExperimentConfig& config, double count) {
  NoiseModel model = noise_model(config);
  const double a = model.alpha_sq;
  const double eta = model.technical_variance();
  const bool uncorrelated = model.kind == NoiseRegime::White ||
                            model.kind == NoiseRegime::PurelyQuantum ||
                            (model.kind == NoiseRegime::Exponential && (model.rho == 0.0 || eta == 0.0));
  if (uncorrelated) {
    return count * a / (1.0 + a * eta);
  }
  if (model.kind == NoiseRegime::Colored) {
    return count * a / (1.0 + count * a * eta);
  }
  // Exponential: integer layout. In slot indexing consecutive events are on
  // average 1/P injections apart.
  if (config.noise_indexing == NoiseIndexing::InjectionSlot) {
    model.rho = std::pow(model.rho, 1.0 / trigger_probability(config));
  }
  const auto n = static_cast<std::size_t>(std::max<long long>(1, std::llround(count)));
  return Precision(model, n).total();
}

}  // namespace

void validate(const DataSet& data) {
  validate(data.config);
  const auto n = data.samples.size();
  if (n < 1) {
    throw DomainError("data set is empty");
  }
  if (static_cast<long long>(n) > data.config.m_photons) {
    throw DomainError("data set holds more samples than injected photons");
  }
  if (!data.slots.empty() && data.slots.size() != n) {
    throw DomainError("slot list length does not match the sample count");
  }
}

Precision precision_for(const DataSet& data) {
  validate(data);
  const NoiseModel model = noise_model(data.config);
  if (data.config.noise_indexing == NoiseIndexing::InjectionSlot && !data.slots.empty()) {
    return Precision(model, data.slots);
  }
  return Precision(model, data.samples.size());
}

double log_likelihood(const DataSet& data, double phi) {
  const Precision prec = precision_for(data);
  const double mean = calibration_factor(data.config) * phi;
  std::vector<double> resid(data.samples.size());
  for (std::size_t i = 0; i < resid.size(); ++i) {
    resid[i] = data.samples[i] - mean;
  }
  const auto n = static_cast<double>(resid.size());
  return -0.5 * prec.quad_form(resid) -
         0.5 * (n * std::log(2.0 * std::numbers::pi) + prec.log_det());
}

double score(const DataSet& data, double phi) {
  const Precision prec = precision_for(data);
  const double f = calibration_factor(data.config);
  // ½ Σ_ij C⁻¹_ij f(s_i + s_j) = f Σ_ij C⁻¹_ij s_j for symmetric C⁻¹
  return f * prec.weighted_sum(data.samples) - f * f * phi * prec.total();
}

double expected_data_count(const ExperimentConfig& config) {
  return trigger_probability(config) * static_cast<double>(config.m_photons);
}

FisherReport fisher_analytic(const ExperimentConfig& config) {
  validate(config);
  const double m = static_cast<double>(config.m_photons);
  double info = 0.0;
  switch (config.measurement_mode) {
    case MeasurementMode::NoPostselection:
      info = precision_total(config, m);
      break;
    case MeasurementMode::WeakPostselection: {
      if (expected_data_count(config) < 1.0) {
        throw DegenerateError("expected number of postselected photons P*M is below one");
      }
      info = fisher_weak_curve(config);
      break;
    }
    case MeasurementMode::StrongPostselection:
      info = fisher_postselected(config);
      break;
  }
  FisherReport report;
  report.analytic = info;
  report.crlb = 1.0 / info;
  report.regime = config.measurement_mode;
  report.noise_kind = config.noise_regime;
  return report;
}

double fisher_weak_curve(const ExperimentConfig& config) {
  validate(config);
  if (config.delta == 0.0) {
    throw DomainError("weak postselection needs delta != 0");
  }
  const double d2 = config.delta * config.delta;
  return precision_total(config, d2 * static_cast<double>(config.m_photons)) / (4.0 * d2);
}

double fisher_postselected(const ExperimentConfig& config) {
  validate(config);
  const double n = postselection_probability(config.delta, config.phi) *
                   static_cast<double>(config.m_photons);
  if (n < 1.0) {
    throw DegenerateError("expected number of postselected photons P*M is below one");
  }
  const double f = amplification_factor(config.delta, config.phi);
  return f * f * precision_total(config, n);
}

FisherReport fisher_numeric(const ExperimentConfig& config, std::size_t n_datasets,
                            RandomStream& rng) {
  if (n_datasets < 100) {
    throw DomainError("fisher_numeric needs at least 100 datasets");
  }
  FisherReport report = fisher_analytic(config);
  const double f = calibration_factor(config);
  const NoiseModel model = noise_model(config);
  const bool by_slot = config.noise_indexing == NoiseIndexing::InjectionSlot;
  std::map<std::size_t, Precision> cache;

  // Welford accumulation of score².
  double mean = 0.0;
  double m2 = 0.0;
  for (std::size_t i = 0; i < n_datasets; ++i) {
    double s = 0.0;
    try {
      const DataSet data = run_experiment(config, rng);
      if (by_slot) {
        const Precision prec(model, data.slots);
        s = f * prec.weighted_sum(data.samples) - f * f * config.phi * prec.total();
      } else {
        const std::size_t n = data.samples.size();
        auto it = cache.find(n);
        if (it == cache.end()) {
          it = cache.emplace(n, Precision(model, n)).first;
        }
        s = f * it->second.weighted_sum(data.samples) - f * f * config.phi * it->second.total();
      }
    } catch (const ZeroPostselections&) {
      // An experiment with no postselected photon carries no information:
      // its score is identically zero and it still counts toward E[score²].
      s = 0.0;
    }
    const double x = s * s;
    const double delta = x - mean;
    mean += delta / static_cast<double>(i + 1);
    m2 += delta * (x - mean);
  }
  const double var = m2 / static_cast<double>(n_datasets - 1);
  report.numeric = mean;
  report.numeric_se = std::sqrt(var / static_cast<double>(n_datasets));
  return report;
}

double mle_estimate(const DataSet& data) {
  validate(data);
  const double f = calibration_factor(data.config);
  if (f == 0.0) {
    throw DomainError("amplification factor is zero; phi is not identifiable");
  }
  CompensatedSum sum;
  for (double s : data.samples) sum.add(s);
  return sum.value() / static_cast<double>(data.samples.size()) / f;
}

EstimatorStats estimator_stats(const ExperimentConfig& config) {
  const double info = fisher_analytic(config).analytic;
  EstimatorStats stats;
  stats.std_dev = 1.0 / std::sqrt(info);
  stats.snr = config.phi / stats.std_dev;
  return stats;
}

}  // namespace wva
