#include "wva/bessel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

#include "wva/errors.hpp"

namespace wva {

namespace {

constexpr double kSeriesLimit = 50.0;
constexpr int kDebyeTerms = 12;

using Poly = std::vector<double>;  // coefficients, lowest degree first

double eval(const Poly& poly, double p) {
  double acc = 0.0;
  for (auto it = poly.rbegin(); it != poly.rend(); ++it) {
    acc = acc * p + *it;
  }
  return acc;
}

// Debye polynomials u_k(p) from
//   u_{k+1}(p) = p²(1 - p²) u_k'(p) / 2 + (1/8) ∫_0^p (1 - 5t²) u_k(t) dt.
std::array<Poly, kDebyeTerms> make_debye_polys() {
  std::array<Poly, kDebyeTerms> polys;
  polys[0] = {1.0};
  for (int k = 0; k + 1 < kDebyeTerms; ++k) {
    const Poly& u = polys[k];
    Poly next(u.size() + 3, 0.0);
    for (std::size_t n = 1; n < u.size(); ++n) {
      // p²(1-p²)·n·c p^{n-1} / 2
      const double d = 0.5 * static_cast<double>(n) * u[n];
      next[n + 1] += d;
      next[n + 3] -= d;
    }
    for (std::size_t n = 0; n < u.size(); ++n) {
      next[n + 1] += u[n] / (8.0 * static_cast<double>(n + 1));
      next[n + 3] -= 5.0 * u[n] / (8.0 * static_cast<double>(n + 3));
    }
    polys[k + 1] = std::move(next);
  }
  return polys;
}

const std::array<Poly, kDebyeTerms>& debye_polys() {
  static const auto polys = make_debye_polys();
  return polys;
}

double log_series(int order, double x) {
  const double nu = static_cast<double>(order);
  const double q = 0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 0; k < 10000; ++k) {
    term *= q / ((k + 1.0) * (nu + k + 1.0));
    sum += term;
    if (term < sum * 1e-17 && (k + 1.0) * (nu + k + 1.0) > q) {
      break;
    }
  }
  return nu * std::log(0.5 * x) - std::lgamma(nu + 1.0) + std::log(sum);
}

// Both asymptotic forms below return log(e^{-x} I_ν(x)).
double log_hankel_scaled(int order, double x) {
  const double mu = 4.0 * static_cast<double>(order) * static_cast<double>(order);
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    const double odd = 2.0 * k - 1.0;
    const double next = -term * (mu - odd * odd) / (8.0 * k * x);
    if (std::abs(next) >= std::abs(term)) {
      break;
    }
    term = next;
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) {
      break;
    }
  }
  return -0.5 * std::log(2.0 * std::numbers::pi * x) + std::log(sum);
}

double log_debye_scaled(int order, double x) {
  const double nu = static_cast<double>(order);
  const double root = std::hypot(nu, x);  // ν√(1 + z²)
  const double p = nu / root;
  // ν·η - x, with ν√(1+z²) - x rewritten as ν² / (root + x)
  const double nu_eta = nu * nu / (root + x) + nu * std::log(x / (nu + root));
  const auto& polys = debye_polys();
  double sum = 0.0;
  double inv_pow = 1.0;
  for (int k = 0; k < kDebyeTerms; ++k) {
    sum += eval(polys[k], p) * inv_pow;
    inv_pow /= nu;
  }
  return nu_eta - 0.5 * std::log(2.0 * std::numbers::pi * nu) + 0.5 * std::log(p) + std::log(sum);
}

}  // namespace

double log_bessel_i_scaled(int order, double x) {
  if (order < 0) {
    throw DomainError("log_bessel_i requires a nonnegative order");
  }
  if (!(x >= 0.0) || std::isinf(x)) {
    throw DomainError("log_bessel_i requires a finite argument x >= 0");
  }
  if (x == 0.0) {
    return order == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
  }
  if (x <= kSeriesLimit) {
    return log_series(order, x) - x;
  }
  if (order == 0) {
    return log_hankel_scaled(order, x);
  }
  return log_debye_scaled(order, x);
}

double log_bessel_i(int order, double x) {
  if (x > 0.0 && x <= kSeriesLimit && order >= 0) {
    return log_series(order, x);
  }
  return log_bessel_i_scaled(order, x) + x;
}

}  // namespace wva
