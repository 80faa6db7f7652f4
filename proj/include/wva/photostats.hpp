#pragma once

#include <complex>
#include <cstdint>
#include <numbers>
#include <utility>

#include <boost/multiprecision/cpp_int.hpp>

#include "wva/random.hpp"

namespace wva {

/// Exact unsigned integer wide enough for every S(r, m) with r <= 64.
using BigCount = boost::multiprecision::uint256_t;

inline constexpr int kMaxStirlingOrder = 64;
inline constexpr int kMaxMomentOrder = 32;
inline constexpr double kGaussianThreshold = 50.0;  // photons
inline constexpr double kSupportSigmas = 20.0;

/// Coherent amplitudes at the two output ports of the phase interferometer.
struct OutputAmplitudes {
  std::complex<double> beta;   // port A'
  std::complex<double> gamma;  // port B'
  double theta = 0.0;
};

/// Poisson intensities of the two detectors: mu_a = |β|², mu_b = |γ|².
struct SkellamParams {
  double mu_a = 0.0;
  double mu_b = 0.0;
};

/// θ = θ0 + Δθ + Θ with the reflection shift θ0 = π and phase-shifter
/// setting Θ = -π/2.
struct PhaseDecomposition {
  double theta0 = std::numbers::pi;
  double capital_theta = -0.5 * std::numbers::pi;
  double delta_theta = 0.0;

  double theta() const { return theta0 + delta_theta + capital_theta; }
};

/// β = -(iα/2)(1 - e^{iθ}), γ = -(α/2)(1 + e^{iθ}).
OutputAmplitudes interferometer_output(std::complex<double> alpha, double theta);

/// Detector intensities for a real probe amplitude |α| and signal phase Δθ:
/// mu_a = |α|²(1 + sin Δθ)/2, mu_b = |α|²(1 - sin Δθ)/2.
SkellamParams skellam_params(double alpha_sq, double delta_theta);

/// Stirling number of the second kind S(r, m), exact. 0 <= m <= r <= 64.
BigCount stirling2(int r, int m);

/// Touchard polynomial T_k(x) = Σ_m S(k, m) x^m, 0 <= k <= 64.
double touchard(int k, double x);

/// E[Dⁿ] for D = X_A - X_B, X_A ~ Poisson(mu_a), X_B ~ Poisson(mu_b), via
/// Σ_k C(n,k) (-1)^{n-k} T_k(mu_a) T_{n-k}(mu_b). n <= 32.
double moment_d(int n, const SkellamParams& params);

/// log P(D = k) in the phase form
///   e^{-|α|²} ((1+sinΔθ)/(1-sinΔθ))^{k/2} I_|k|(|α|² cosΔθ).
/// Requires alpha_sq > 0 and |Δθ| < π/2.
double skellam_log_pmf(std::int64_t k, double alpha_sq, double delta_theta);
double skellam_pmf(std::int64_t k, double alpha_sq, double delta_theta);

/// The generic Skellam form e^{-(mu_a+mu_b)} (√(mu_a/mu_b))^k I_|k|(2√(mu_a mu_b)).
double skellam_log_pmf(std::int64_t k, const SkellamParams& params);
double skellam_pmf(std::int64_t k, const SkellamParams& params);

/// Inclusive support window [mean - 20σ, mean + 20σ] used for PMF sums.
std::pair<std::int64_t, std::int64_t> skellam_support(double alpha_sq, double delta_theta);

/// One photon-count difference X_A' - X_B'.
std::int64_t sample_d(RandomStream& rng, double alpha_sq, double delta_theta);

/// One draw of D/|α|² from its Gaussian limit N(Δθ, 1/|α|²). Requires
/// alpha_sq >= kGaussianThreshold; below it use sample_d(...) / alpha_sq.
double sample_dtilde_gaussian(RandomStream& rng, double alpha_sq, double delta_theta);

}  // namespace wva
