// Independent reference implementations used only by the tests. Each one
// takes a different route from the library code it checks.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <boost/math/special_functions/bessel.hpp>
#include <boost/multiprecision/cpp_int.hpp>

namespace oracle {

using boost::multiprecision::cpp_int;

/// Number of partitions of an r-set into m nonempty blocks, by enumerating
/// restricted growth strings. Exponential time; keep r small.
inline std::uint64_t count_set_partitions(int r, int m) {
  if (r == 0) return m == 0 ? 1 : 0;
  std::vector<int> a(static_cast<std::size_t>(r), 0);
  std::uint64_t count = 0;
  std::function<void(int, int)> rec = [&](int pos, int max_block) {
    if (pos == r) {
      if (max_block + 1 == m) ++count;
      return;
    }
    for (int b = 0; b <= max_block + 1 && b < m; ++b) {
      a[static_cast<std::size_t>(pos)] = b;
      rec(pos + 1, std::max(max_block, b));
    }
  };
  a[0] = 0;
  rec(1, 0);
  return count;
}

/// S(n, k) = (1/k!) Σ_j (-1)^j C(k, j) (k - j)^n in arbitrary precision.
inline cpp_int stirling2_explicit(int n, int k) {
  cpp_int sum = 0;
  cpp_int binom = 1;
  for (int j = 0; j <= k; ++j) {
    cpp_int p = boost::multiprecision::pow(cpp_int(k - j), static_cast<unsigned>(n));
    if (j % 2 == 0) sum += binom * p;
    else sum -= binom * p;
    binom = binom * (k - j) / (j + 1);
  }
  cpp_int fact = 1;
  for (int i = 2; i <= k; ++i) fact *= i;
  return sum / fact;
}

inline long double poisson_pmf(std::int64_t n, long double mu) {
  if (n < 0) return 0.0L;
  if (mu == 0.0L) return n == 0 ? 1.0L : 0.0L;
  return std::exp(static_cast<long double>(n) * std::log(mu) - mu -
                  std::lgamma(static_cast<long double>(n) + 1.0L));
}

/// P(X_A - X_B = k) as an explicit convolution of two Poisson laws.
inline double skellam_convolution(std::int64_t k, double mu_a, double mu_b) {
  long double total = 0.0L;
  const auto upper = static_cast<std::int64_t>(mu_a + mu_b + 40.0 * std::sqrt(mu_a + mu_b + 1.0) + 40.0);
  for (std::int64_t j = std::max<std::int64_t>(0, -k); j <= upper; ++j) {
    total += poisson_pmf(k + j, mu_a) * poisson_pmf(j, mu_b);
  }
  return static_cast<double>(total);
}

/// Raw moment E[Xⁿ] of Poisson(mu) by summing the mass function.
inline double poisson_raw_moment(int n, double mu) {
  long double total = 0.0L;
  const auto upper = static_cast<std::int64_t>(mu + 40.0 * std::sqrt(mu + 1.0) + 40.0);
  for (std::int64_t x = 0; x <= upper; ++x) {
    total += std::pow(static_cast<long double>(x), n) * poisson_pmf(x, mu);
  }
  return static_cast<double>(total);
}

inline double log_bessel_i(int order, double x) {
  return std::log(boost::math::cyl_bessel_i(order, x));
}

/// Covariance assembled entry by entry from its definition.
inline Eigen::MatrixXd covariance(std::size_t n, double alpha_sq, double eta_sq, double rho,
                                  bool colored) {
  Eigen::MatrixXd c(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double lag = std::abs(static_cast<double>(i) - static_cast<double>(j));
      const double corr = colored ? 1.0 : (i == j ? 1.0 : std::pow(rho, lag));
      c(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (i == j ? 1.0 / alpha_sq : 0.0) + eta_sq * corr;
    }
  }
  return c;
}

inline Eigen::MatrixXd inverse(const Eigen::MatrixXd& m) { return m.fullPivLu().inverse(); }

inline Eigen::VectorXd solve(const Eigen::MatrixXd& m, const Eigen::VectorXd& b) {
  return m.fullPivLu().solve(b);
}

inline double log_det(const Eigen::MatrixXd& m) {
  const Eigen::PartialPivLU<Eigen::MatrixXd> lu(m);
  double s = 0.0;
  for (Eigen::Index i = 0; i < m.rows(); ++i) s += std::log(std::abs(lu.matrixLU()(i, i)));
  return s;
}

/// Central difference with step h.
inline double derivative(const std::function<double(double)>& f, double x, double h) {
  return (f(x + h) - f(x - h)) / (2.0 * h);
}

/// Two-sided Kolmogorov-Smirnov statistic of integer samples against a
/// discrete CDF evaluated on the sample range.
inline double ks_distance(std::vector<std::int64_t> samples,
                          const std::function<double(std::int64_t)>& pmf) {
  std::sort(samples.begin(), samples.end());
  const auto n = static_cast<double>(samples.size());
  const std::int64_t lo = samples.front() - 50;
  const std::int64_t hi = samples.back();
  double cdf = 0.0;
  for (std::int64_t k = lo - 2000; k < lo; ++k) cdf += pmf(k);
  double worst = 0.0;
  std::size_t idx = 0;
  for (std::int64_t k = lo; k <= hi; ++k) {
    cdf += pmf(k);
    while (idx < samples.size() && samples[idx] <= k) ++idx;
    worst = std::max(worst, std::abs(static_cast<double>(idx) / n - cdf));
  }
  return worst;
}

inline double mean(const std::vector<double>& v) {
  long double s = 0.0L;
  for (double x : v) s += x;
  return static_cast<double>(s / static_cast<long double>(v.size()));
}

inline double variance(const std::vector<double>& v) {
  const double m = mean(v);
  long double s = 0.0L;
  for (double x : v) s += (x - m) * (x - m);
  return static_cast<double>(s / static_cast<long double>(v.size() - 1));
}

}  // namespace oracle
