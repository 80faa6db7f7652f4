#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Cholesky>
#include <Eigen/Dense>

#include "wva/model.hpp"
#include "wva/random.hpp"

namespace wva {

using CovarianceMatrix = Eigen::MatrixXd;

/// Covariance of s_i = D̃_i + η_i:
///   C_ij = δ_ij / |α|² + η̃² ρ^{|i - j|}
/// White is ρ = 0, Colored is the constant-correlation limit ρ → 1 and
/// PurelyQuantum drops the technical term.
struct NoiseModel {
  NoiseRegime kind = NoiseRegime::White;
  double eta_sq = 0.0;
  double rho = 0.0;  // per-step correlation, Exponential only
  double alpha_sq = 1.0;

  double quantum_variance() const { return 1.0 / alpha_sq; }
  double technical_variance() const { return kind == NoiseRegime::PurelyQuantum ? 0.0 : eta_sq; }
  /// Technical-noise correlation between points `lag` steps apart.
  double correlation(std::uint64_t lag) const;
};

/// ρ = exp(-1/(Γτ)); zero when τ = 0.
double correlation_per_step(double gamma_rate, double tau_corr);

NoiseModel noise_model(const ExperimentConfig& config);

/// Throws DomainError on a model that violates its invariants.
void validate(const NoiseModel& model);

CovarianceMatrix covariance(std::size_t n, const NoiseModel& model);
/// Covariance for data recorded at the given injection slots (lags are
/// slot differences).
CovarianceMatrix covariance_at(std::span<const std::uint64_t> slots, const NoiseModel& model);

/// Closed form for White, PurelyQuantum and Colored; Cholesky solve for
/// Exponential.
CovarianceMatrix inverse_covariance(std::size_t n, const NoiseModel& model);

/// Zero-mean technical-noise path η_1..η_n. Exponential kind follows the
/// stationary AR(1) recursion η_{i+1} = ρη_i + √(1-ρ²) η̃ ξ_i; Colored
/// draws one offset shared by the whole path.
std::vector<double> sample_noise(RandomStream& rng, std::size_t n, const NoiseModel& model);
std::vector<double> sample_noise_at(RandomStream& rng, std::span<const std::uint64_t> slots,
                                    const NoiseModel& model);

/// Linear-algebra queries against C⁻¹ for one data layout.
class Precision {
 public:
  Precision(const NoiseModel& model, std::size_t n);
  Precision(const NoiseModel& model, std::span<const std::uint64_t> slots);

  std::size_t size() const { return n_; }

  /// Σ_ij C⁻¹_ij
  double total() const { return total_; }
  /// Σ_ij C⁻¹_ij v_j
  double weighted_sum(std::span<const double> v) const;
  /// vᵀ C⁻¹ v
  double quad_form(std::span<const double> v) const;
  /// log |C|
  double log_det() const { return log_det_; }

 private:
  void init_closed_form();
  void init_dense(const CovarianceMatrix& cov);

  NoiseModel model_;
  std::size_t n_ = 0;
  double total_ = 0.0;
  double log_det_ = 0.0;
  // Closed forms: C⁻¹ = diag·I - offdiag·11ᵀ
  double diag_ = 0.0;
  double offdiag_ = 0.0;
  std::optional<Eigen::LLT<Eigen::MatrixXd>> llt_;
  Eigen::VectorXd inv_ones_;  // C⁻¹ 1 (dense path)
};

}  // namespace wva
