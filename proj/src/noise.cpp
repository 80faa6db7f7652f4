#include "wva/noise.hpp"

#include <cmath>

#include "wva/errors.hpp"

namespace wva {

namespace {

void check_size(std::size_t n) {
  if (n < 1) {
    throw DomainError("noise model needs at least one data point");
  }
}

bool needs_dense(const NoiseModel& model) {
  return model.kind == NoiseRegime::Exponential && model.rho > 0.0 && model.eta_sq > 0.0;
}

std::vector<std::uint64_t> index_slots(std::size_t n) {
  std::vector<std::uint64_t> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = i;
  return slots;
}

}  // namespace

double NoiseModel::correlation(std::uint64_t lag) const {
  switch (kind) {
    case NoiseRegime::PurelyQuantum: return 0.0;
    case NoiseRegime::White: return lag == 0 ? 1.0 : 0.0;
    case NoiseRegime::Colored: return 1.0;
    case NoiseRegime::Exponential:
      if (lag == 0) return 1.0;
      return rho == 0.0 ? 0.0 : std::pow(rho, static_cast<double>(lag));
  }
  return 0.0;
}

double correlation_per_step(double gamma_rate, double tau_corr) {
  const double steps = gamma_rate * tau_corr;
  return steps > 0.0 ? std::exp(-1.0 / steps) : 0.0;
}

NoiseModel noise_model(const ExperimentConfig& config) {
  NoiseModel model;
  model.kind = config.noise_regime;
  model.eta_sq = effective_eta_sq(config);
  model.alpha_sq = config.alpha_sq;
  if (model.kind == NoiseRegime::Exponential) {
    model.rho = correlation_per_step(config.gamma_rate, config.tau_corr);
  }
  return model;
}

void validate(const NoiseModel& model) {
  if (!(model.alpha_sq > 0.0) || !std::isfinite(model.alpha_sq)) {
    throw DomainError("noise model alpha_sq must be finite and > 0");
  }
  if (!(model.eta_sq >= 0.0) || !std::isfinite(model.eta_sq)) {
    throw DomainError("noise model eta_sq must be finite and >= 0");
  }
  if (model.kind == NoiseRegime::Exponential && !(model.rho >= 0.0 && model.rho < 1.0)) {
    throw DomainError("exponential noise needs 0 <= rho < 1");
  }
}

CovarianceMatrix covariance_at(std::span<const std::uint64_t> slots, const NoiseModel& model) {
  validate(model);
  check_size(slots.size());
  const std::size_t n = slots.size();
  const double tech = model.technical_variance();
  CovarianceMatrix cov(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j <= i; ++j) {
      const std::uint64_t lag = slots[i] > slots[j] ? slots[i] - slots[j] : slots[j] - slots[i];
      double value = tech * model.correlation(lag);
      if (i == j) value += model.quantum_variance();
      cov(i, j) = value;
      cov(j, i) = value;
    }
  }
  return cov;
}

CovarianceMatrix covariance(std::size_t n, const NoiseModel& model) {
  check_size(n);
  const auto slots = index_slots(n);
  return covariance_at(slots, model);
}

CovarianceMatrix inverse_covariance(std::size_t n, const NoiseModel& model) {
  validate(model);
  check_size(n);
  const double a = model.alpha_sq;
  const double eta = model.technical_variance();
  const auto dn = static_cast<double>(n);
  switch (model.kind) {
    case NoiseRegime::White:
    case NoiseRegime::PurelyQuantum:
      return CovarianceMatrix::Identity(n, n) * (a / (1.0 + a * eta));
    case NoiseRegime::Colored: {
      const double downdate = eta * a * a / (1.0 + dn * eta * a);
      return CovarianceMatrix::Identity(n, n) * a -
             CovarianceMatrix::Constant(n, n, downdate);
    }
    case NoiseRegime::Exponential: {
      if (!needs_dense(model)) {
        return CovarianceMatrix::Identity(n, n) * (a / (1.0 + a * eta));
      }
      const CovarianceMatrix cov = covariance(n, model);
      Eigen::LLT<Eigen::MatrixXd> llt(cov);
      if (llt.info() != Eigen::Success) {
        throw DomainError("covariance matrix is not positive definite");
      }
      return llt.solve(CovarianceMatrix::Identity(n, n));
    }
  }
  throw DomainError("unknown noise kind");
}

std::vector<double> sample_noise_at(RandomStream& rng, std::span<const std::uint64_t> slots,
                                    const NoiseModel& model) {
  validate(model);
  check_size(slots.size());
  const std::size_t n = slots.size();
  const double eta = std::sqrt(model.technical_variance());
  std::vector<double> path(n, 0.0);
  switch (model.kind) {
    case NoiseRegime::PurelyQuantum:
      break;
    case NoiseRegime::White:
      for (auto& v : path) v = eta * rng.normal();
      break;
    case NoiseRegime::Colored: {
      const double offset = eta * rng.normal();
      for (auto& v : path) v = offset;
      break;
    }
    case NoiseRegime::Exponential: {
      path[0] = eta * rng.normal();
      for (std::size_t i = 1; i < n; ++i) {
        const std::uint64_t lag = slots[i] > slots[i - 1] ? slots[i] - slots[i - 1]
                                                          : slots[i - 1] - slots[i];
        const double r = model.correlation(lag);
        path[i] = r * path[i - 1] + std::sqrt(1.0 - r * r) * eta * rng.normal();
      }
      break;
    }
  }
  return path;
}

std::vector<double> sample_noise(RandomStream& rng, std::size_t n, const NoiseModel& model) {
  check_size(n);
  const auto slots = index_slots(n);
  return sample_noise_at(rng, slots, model);
}

Precision::Precision(const NoiseModel& model, std::size_t n) : model_(model), n_(n) {
  validate(model);
  check_size(n);
  if (needs_dense(model)) {
    init_dense(covariance(n, model));
  } else {
    init_closed_form();
  }
}

Precision::Precision(const NoiseModel& model, std::span<const std::uint64_t> slots)
    : model_(model), n_(slots.size()) {
  validate(model);
  check_size(n_);
  if (needs_dense(model)) {
    init_dense(covariance_at(slots, model));
  } else {
    init_closed_form();
  }
}

void Precision::init_closed_form() {
  const double a = model_.alpha_sq;
  const double eta = model_.technical_variance();
  const auto dn = static_cast<double>(n_);
  if (model_.kind == NoiseRegime::Colored) {
    diag_ = a;
    offdiag_ = eta * a * a / (1.0 + dn * eta * a);
    total_ = dn * a / (1.0 + dn * a * eta);
    // |C| = a^{-N} (1 + N η a)
    log_det_ = -dn * std::log(a) + std::log1p(dn * eta * a);
  } else {
    diag_ = a / (1.0 + a * eta);
    offdiag_ = 0.0;
    total_ = dn * diag_;
    log_det_ = dn * std::log(1.0 / a + eta);
  }
}

void Precision::init_dense(const CovarianceMatrix& cov) {
  llt_.emplace(cov);
  if (llt_->info() != Eigen::Success) {
    throw DomainError("covariance matrix is not positive definite");
  }
  inv_ones_ = llt_->solve(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_)));
  total_ = inv_ones_.sum();
  double log_det = 0.0;
  for (Eigen::Index i = 0; i < static_cast<Eigen::Index>(n_); ++i) {
    log_det += std::log(llt_->matrixLLT()(i, i));
  }
  log_det_ = 2.0 * log_det;
}

double Precision::weighted_sum(std::span<const double> v) const {
  if (v.size() != n_) {
    throw DomainError("data length does not match the covariance dimension");
  }
  if (llt_) {
    const Eigen::Map<const Eigen::VectorXd> vec(v.data(), static_cast<Eigen::Index>(n_));
    return inv_ones_.dot(vec);
  }
  double sum = 0.0;
  for (double x : v) sum += x;
  return (diag_ - static_cast<double>(n_) * offdiag_) * sum;
}

double Precision::quad_form(std::span<const double> v) const {
  if (v.size() != n_) {
    throw DomainError("data length does not match the covariance dimension");
  }
  if (llt_) {
    const Eigen::Map<const Eigen::VectorXd> vec(v.data(), static_cast<Eigen::Index>(n_));
    const Eigen::VectorXd half = llt_->matrixL().solve(vec);
    return half.squaredNorm();
  }
  double sum = 0.0;
  double sq = 0.0;
  for (double x : v) {
    sum += x;
    sq += x * x;
  }
  return diag_ * sq - offdiag_ * sum * sum;
}

}  // namespace wva
