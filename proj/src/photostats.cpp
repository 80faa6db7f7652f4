#include "wva/photostats.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "wva/bessel.hpp"
#include "wva/errors.hpp"

namespace wva {

namespace {

constexpr std::size_t kTableSize = kMaxStirlingOrder + 1;

struct StirlingTable {
  std::array<std::array<BigCount, kTableSize>, kTableSize> exact{};
  std::array<std::array<double, kTableSize>, kTableSize> approx{};
};

// S(n+1, k) = k S(n, k) + S(n, k-1), S(0, 0) = 1.
const StirlingTable& stirling_table() {
  static const StirlingTable table = [] {
    StirlingTable t;
    t.exact[0][0] = 1;
    for (std::size_t n = 0; n + 1 < kTableSize; ++n) {
      for (std::size_t k = 1; k <= n + 1; ++k) {
        t.exact[n + 1][k] = BigCount(k) * t.exact[n][k] + t.exact[n][k - 1];
      }
    }
    for (std::size_t n = 0; n < kTableSize; ++n) {
      for (std::size_t k = 0; k <= n; ++k) {
        t.approx[n][k] = t.exact[n][k].convert_to<double>();
      }
    }
    return t;
  }();
  return table;
}

void check_phase_window(double alpha_sq, double delta_theta) {
  if (!(alpha_sq > 0.0) || !std::isfinite(alpha_sq)) {
    throw DomainError("alpha_sq must be finite and > 0");
  }
  if (!std::isfinite(delta_theta) || std::abs(delta_theta) >= 0.5 * std::numbers::pi) {
    std::ostringstream msg;
    msg << "|delta_theta| must be < pi/2, got " << delta_theta;
    throw DomainError(msg.str());
  }
}

double binomial(int n, int k) {
  double c = 1.0;
  for (int i = 1; i <= k; ++i) {
    c = c * static_cast<double>(n - k + i) / static_cast<double>(i);
  }
  return std::round(c);
}

double log_poisson(std::int64_t k, double mean) {
  if (k < 0) return -INFINITY;
  if (mean == 0.0) return k == 0 ? 0.0 : -INFINITY;
  const double kd = static_cast<double>(k);
  return kd * std::log(mean) - mean - std::lgamma(kd + 1.0);
}

}  // namespace

OutputAmplitudes interferometer_output(std::complex<double> alpha, double theta) {
  using namespace std::complex_literals;
  const std::complex<double> phase = std::polar(1.0, theta);
  OutputAmplitudes out;
  out.beta = -(1i * alpha / 2.0) * (1.0 - phase);
  out.gamma = -(alpha / 2.0) * (1.0 + phase);
  out.theta = theta;
  return out;
}

SkellamParams skellam_params(double alpha_sq, double delta_theta) {
  // |β|² = |α|²(1 - cos θ)/2 and cos θ = -sin Δθ for θ = π/2 + Δθ.
  const double s = std::sin(delta_theta);
  return {0.5 * alpha_sq * (1.0 + s), 0.5 * alpha_sq * (1.0 - s)};
}

BigCount stirling2(int r, int m) {
  if (r < 0 || m < 0 || r > kMaxStirlingOrder || m > r) {
    throw RangeError("stirling2 requires 0 <= m <= r <= 64, got r=" + std::to_string(r) +
                     " m=" + std::to_string(m));
  }
  return stirling_table().exact[r][m];
}

double touchard(int k, double x) {
  if (k < 0 || k > kMaxStirlingOrder) {
    throw RangeError("touchard requires 0 <= k <= 64, got " + std::to_string(k));
  }
  const auto& row = stirling_table().approx[k];
  double acc = 0.0;
  for (int m = k; m >= 0; --m) {
    acc = acc * x + row[m];
  }
  return acc;
}

double moment_d(int n, const SkellamParams& params) {
  if (n < 0 || n > kMaxMomentOrder) {
    throw RangeError("moment_d requires 0 <= n <= 32, got " + std::to_string(n));
  }
  double acc = 0.0;
  for (int k = 0; k <= n; ++k) {
    const double sign = ((n - k) % 2 == 0) ? 1.0 : -1.0;
    acc += sign * binomial(n, k) * touchard(k, params.mu_a) * touchard(n - k, params.mu_b);
  }
  return acc;
}

double skellam_log_pmf(std::int64_t k, double alpha_sq, double delta_theta) {
  check_phase_window(alpha_sq, delta_theta);
  const double s = std::sin(delta_theta);
  const double half_angle = std::sin(0.5 * delta_theta);
  const double one_minus_cos = 2.0 * half_angle * half_angle;
  const double x = alpha_sq * std::cos(delta_theta);
  const auto order = static_cast<int>(k < 0 ? -k : k);
  // -|α|² + log I(x) = -|α|²(1 - cos Δθ) + log(e^{-x} I(x))
  return -alpha_sq * one_minus_cos + 0.5 * static_cast<double>(k) * (std::log1p(s) - std::log1p(-s)) +
         log_bessel_i_scaled(order, x);
}

double skellam_pmf(std::int64_t k, double alpha_sq, double delta_theta) {
  return std::exp(skellam_log_pmf(k, alpha_sq, delta_theta));
}

double skellam_log_pmf(std::int64_t k, const SkellamParams& params) {
  const double a = params.mu_a;
  const double b = params.mu_b;
  if (!(a >= 0.0) || !(b >= 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("Skellam intensities must be finite and >= 0");
  }
  if (b == 0.0) return log_poisson(k, a);
  if (a == 0.0) return log_poisson(-k, b);
  const double ra = std::sqrt(a);
  const double rb = std::sqrt(b);
  const auto order = static_cast<int>(k < 0 ? -k : k);
  // -(a + b) + 2√(ab) = -(√a - √b)²
  const double gap = ra - rb;
  return -gap * gap + static_cast<double>(k) * (std::log(ra) - std::log(rb)) +
         log_bessel_i_scaled(order, 2.0 * ra * rb);
}

double skellam_pmf(std::int64_t k, const SkellamParams& params) {
  return std::exp(skellam_log_pmf(k, params));
}

std::pair<std::int64_t, std::int64_t> skellam_support(double alpha_sq, double delta_theta) {
  check_phase_window(alpha_sq, delta_theta);
  const double mean = alpha_sq * std::sin(delta_theta);
  const double width = kSupportSigmas * std::sqrt(alpha_sq);
  return {static_cast<std::int64_t>(std::floor(mean - width)),
          static_cast<std::int64_t>(std::ceil(mean + width))};
}

std::int64_t sample_d(RandomStream& rng, double alpha_sq, double delta_theta) {
  check_phase_window(alpha_sq, delta_theta);
  const SkellamParams p = skellam_params(alpha_sq, delta_theta);
  const std::int64_t a = rng.poisson(p.mu_a);
  const std::int64_t b = rng.poisson(p.mu_b);
  return a - b;
}

double sample_dtilde_gaussian(RandomStream& rng, double alpha_sq, double delta_theta) {
  if (!(alpha_sq >= kGaussianThreshold) || !std::isfinite(alpha_sq)) {
    std::ostringstream msg;
    msg << "Gaussian photocount limit needs alpha_sq >= " << kGaussianThreshold << ", got "
        << alpha_sq;
    throw DomainError(msg.str());
  }
  return rng.normal(delta_theta, 1.0 / std::sqrt(alpha_sq));
}

}  // namespace wva
