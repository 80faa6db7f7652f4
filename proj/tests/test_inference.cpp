#include "doctest.h"

#include <cmath>
#include <numbers>
#include <vector>

#include "oracles.hpp"
#include "wva/errors.hpp"
#include "wva/inference.hpp"

using namespace wva;

namespace {

ExperimentConfig reference_params(MeasurementMode mode, NoiseRegime noise = NoiseRegime::Colored) {
  ExperimentConfig c;
  c.alpha_sq = 100.0;
  c.m_photons = 1000;
  c.eta_sq = 0.05;
  c.delta = 0.1;
  c.phi = 1e-3;
  c.noise_regime = noise;
  c.measurement_mode = mode;
  return c;
}

DataSet synthetic_data(const ExperimentConfig& config, std::size_t n, std::uint64_t seed) {
  RandomStream rng(seed);
  DataSet d;
  d.config = config;
  d.samples.resize(n);
  for (double& s : d.samples) s = calibration_factor(config) * config.phi + 0.2 * rng.normal();
  return d;
}

double dense_total(const ExperimentConfig& c, std::size_t n) {
  const NoiseModel m = noise_model(c);
  const bool colored = c.noise_regime == NoiseRegime::Colored;
  return oracle::solve(oracle::covariance(n, m.alpha_sq, m.technical_variance(), m.rho, colored),
                       Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n)))
      .sum();
}

}  // namespace

TEST_CASE("analytic Fisher information at the reference parameters") {
  const auto weak = fisher_analytic(reference_params(MeasurementMode::WeakPostselection));
  CHECK(weak.analytic == doctest::Approx(25000.0 / 51.0).epsilon(1e-12));
  CHECK(weak.crlb == doctest::Approx(51.0 / 25000.0).epsilon(1e-12));
  CHECK(weak.regime == MeasurementMode::WeakPostselection);
  CHECK(weak.noise_kind == NoiseRegime::Colored);

  const auto none = fisher_analytic(reference_params(MeasurementMode::NoPostselection));
  CHECK(none.analytic == doctest::Approx(100000.0 / 5001.0).epsilon(1e-12));

  const auto white = fisher_analytic(reference_params(MeasurementMode::NoPostselection, NoiseRegime::White));
  CHECK(white.analytic == doctest::Approx(1000.0 * 100.0 / 6.0).epsilon(1e-12));
  const auto white_weak =
      fisher_analytic(reference_params(MeasurementMode::WeakPostselection, NoiseRegime::White));
  CHECK(white_weak.analytic == doctest::Approx(white.analytic / 4.0).epsilon(1e-12));

  const auto quantum =
      fisher_analytic(reference_params(MeasurementMode::WeakPostselection, NoiseRegime::PurelyQuantum));
  CHECK(quantum.analytic == doctest::Approx(25000.0).epsilon(1e-12));
}

TEST_CASE("Fisher information equals f² times the summed dense inverse") {
  // φ = 0.02, δ = 0.01: P = 2e-4, so M = 50000 gives exactly N = 10
  for (NoiseRegime noise : {NoiseRegime::White, NoiseRegime::Colored, NoiseRegime::PurelyQuantum}) {
    ExperimentConfig c = reference_params(MeasurementMode::StrongPostselection, noise);
    c.phi = 0.02;
    c.delta = 0.01;
    c.m_photons = 50000;
    const double f = amplification_factor(c.delta, c.phi);
    CAPTURE(to_string(noise));
    CHECK(fisher_postselected(c) == doctest::Approx(f * f * dense_total(c, 10)).epsilon(1e-10));
    CHECK(fisher_analytic(c).analytic == doctest::Approx(fisher_postselected(c)).epsilon(1e-15));

    c.measurement_mode = MeasurementMode::NoPostselection;
    c.m_photons = 40;
    CHECK(fisher_analytic(c).analytic == doctest::Approx(dense_total(c, 40)).epsilon(1e-10));

    c.measurement_mode = MeasurementMode::WeakPostselection;
    c.phi = 1e-3;
    c.delta = 0.1;
    c.m_photons = 3000;  // δ²M = 30
    CHECK(fisher_analytic(c).analytic == doctest::Approx(dense_total(c, 30) / 0.04).epsilon(1e-10));
  }
}

TEST_CASE("exponential noise uses the banded covariance") {
  ExperimentConfig c = reference_params(MeasurementMode::NoPostselection, NoiseRegime::Exponential);
  c.m_photons = 60;
  c.tau_corr = 5e-6;
  c.gamma_rate = 1e6;
  const double rho = std::exp(-0.2);
  const double ref = oracle::solve(oracle::covariance(60, 100.0, 0.05, rho, false),
                                   Eigen::VectorXd::Ones(60)).sum();
  CHECK(fisher_analytic(c).analytic == doctest::Approx(ref).epsilon(1e-10));

  // bounded by the white and colored cases
  ExperimentConfig w = c;
  w.noise_regime = NoiseRegime::White;
  ExperimentConfig k = c;
  k.noise_regime = NoiseRegime::Colored;
  CHECK(fisher_analytic(c).analytic < fisher_analytic(w).analytic);
  CHECK(fisher_analytic(c).analytic > fisher_analytic(k).analytic);

  // no correlation time: identical to white
  c.tau_corr = 0.0;
  CHECK(fisher_analytic(c).analytic == doctest::Approx(fisher_analytic(w).analytic).epsilon(1e-13));
}

TEST_CASE("degenerate expected counts") {
  ExperimentConfig c = reference_params(MeasurementMode::WeakPostselection);
  c.m_photons = 50;  // δ²M = 0.5
  CHECK_THROWS_AS(fisher_analytic(c), DegenerateError);
  CHECK(fisher_weak_curve(c) == doctest::Approx(0.5 * 100.0 / (1.0 + 0.5 * 100.0 * 0.05) / 0.04));
  c.measurement_mode = MeasurementMode::StrongPostselection;
  CHECK_THROWS_AS(fisher_postselected(c), DegenerateError);
  c.measurement_mode = MeasurementMode::NoPostselection;
  c.m_photons = 1;
  CHECK_NOTHROW(fisher_analytic(c));
  CHECK(expected_data_count(c) == 1.0);
  c.measurement_mode = MeasurementMode::WeakPostselection;
  c.m_photons = 1000;
  CHECK(expected_data_count(c) == doctest::Approx(1000.0 * (0.01 + 2.5e-7)));
}

TEST_CASE("log-likelihood against the dense Gaussian density") {
  for (NoiseRegime noise : {NoiseRegime::White, NoiseRegime::Colored, NoiseRegime::Exponential}) {
    ExperimentConfig c = reference_params(MeasurementMode::WeakPostselection, noise);
    c.tau_corr = 3e-6;
    const DataSet d = synthetic_data(c, 25, 9);
    const NoiseModel m = noise_model(c);
    const Eigen::MatrixXd cov =
        oracle::covariance(25, m.alpha_sq, m.technical_variance(), m.rho, noise == NoiseRegime::Colored);
    for (double phi : {0.0, 1e-3, -0.02}) {
      Eigen::VectorXd r(25);
      for (int i = 0; i < 25; ++i) r(i) = d.samples[static_cast<std::size_t>(i)] - weak_value(c.delta) * phi;
      const double ref = -0.5 * r.dot(oracle::solve(cov, r)) -
                         0.5 * (25.0 * std::log(2.0 * std::numbers::pi) + oracle::log_det(cov));
      CAPTURE(to_string(noise));
      CHECK(log_likelihood(d, phi) == doctest::Approx(ref).epsilon(1e-10));
    }
  }
}

TEST_CASE("score is the derivative of the log-likelihood") {
  for (NoiseRegime noise : {NoiseRegime::White, NoiseRegime::Colored, NoiseRegime::Exponential,
                            NoiseRegime::PurelyQuantum}) {
    for (MeasurementMode mode : {MeasurementMode::NoPostselection, MeasurementMode::WeakPostselection}) {
      ExperimentConfig c = reference_params(mode, noise);
      c.tau_corr = 3e-6;
      const DataSet d = synthetic_data(c, 30, 4);
      for (double phi : {-0.01, 0.0, 2e-3}) {
        const double fd = oracle::derivative([&](double p) { return log_likelihood(d, p); }, phi, 1e-5);
        CAPTURE(to_string(noise));
        CAPTURE(to_string(mode));
        CHECK(score(d, phi) == doctest::Approx(fd).epsilon(1e-6).scale(1.0));
      }
    }
  }
}

TEST_CASE("sample mean estimator") {
  ExperimentConfig c = reference_params(MeasurementMode::WeakPostselection);
  DataSet d;
  d.config = c;
  d.samples = {0.1, -0.2, 0.4, 0.3};
  CHECK(mle_estimate(d) == doctest::Approx(0.15 / weak_value(0.1)).epsilon(1e-15));

  // zero of the score for uncorrelated and fully correlated noise
  for (NoiseRegime noise : {NoiseRegime::White, NoiseRegime::Colored}) {
    d.config.noise_regime = noise;
    CHECK(score(d, mle_estimate(d)) == doctest::Approx(0.0).scale(1.0).epsilon(1e-9));
  }

  d.config.measurement_mode = MeasurementMode::NoPostselection;
  CHECK(mle_estimate(d) == doctest::Approx(0.15).epsilon(1e-15));

  d.config.measurement_mode = MeasurementMode::StrongPostselection;
  d.config.delta = 0.0;
  CHECK_THROWS_AS(mle_estimate(d), DomainError);
}

TEST_CASE("data set validation") {
  DataSet d;
  d.config = reference_params(MeasurementMode::WeakPostselection);
  CHECK_THROWS_AS(validate(d), DomainError);
  d.samples.assign(1001, 0.0);
  CHECK_THROWS_AS(validate(d), DomainError);
  d.samples.assign(10, 0.0);
  d.slots = {1, 2, 3};
  CHECK_THROWS_AS(validate(d), DomainError);
  d.slots.clear();
  CHECK_NOTHROW(validate(d));
}

TEST_CASE("estimator statistics") {
  const ExperimentConfig c = reference_params(MeasurementMode::WeakPostselection);
  const auto stats = estimator_stats(c);
  CHECK(stats.std_dev == doctest::Approx(std::sqrt(51.0 / 25000.0)).epsilon(1e-12));
  CHECK(stats.snr == doctest::Approx(1e-3 * std::sqrt(25000.0 / 51.0)).epsilon(1e-12));
}

TEST_CASE("Monte-Carlo Fisher information") {
  for (NoiseRegime noise : {NoiseRegime::White, NoiseRegime::Colored}) {
    ExperimentConfig c = reference_params(MeasurementMode::NoPostselection, noise);
    c.m_photons = 100;
    RandomStream rng(77);
    const auto rep = fisher_numeric(c, 20000, rng);
    REQUIRE(rep.numeric);
    REQUIRE(rep.numeric_se);
    CAPTURE(to_string(noise));
    CHECK(std::abs(*rep.numeric - rep.analytic) < 4.0 * *rep.numeric_se);
    CHECK(*rep.numeric_se < 0.03 * rep.analytic);
  }
  RandomStream rng(1);
  CHECK_THROWS_AS(fisher_numeric(reference_params(MeasurementMode::WeakPostselection), 99, rng), DomainError);
}
