#pragma once

// Building-block distributions for the samplers: the Polya-Gamma PG(1,k)
// density and an exact rejection sampler for it, inverse-gamma, multivariate
// normal, and Student-t draws. All samplers are pure functions of their
// parameters and the supplied RngStream.

#include <Eigen/Dense>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "sepbayes/rng.hpp"

namespace sepbayes {

namespace detail {
constexpr double kPi = 3.141592653589793238462643383279502884;

// Lower-triangular Cholesky factor of a symmetric matrix. Returns -1 on
// success; otherwise the zero-based column index at which the factorization
// failed (the leading minor of that order + 1 is not positive definite).
inline int cholesky_lower(const Eigen::MatrixXd& m, Eigen::MatrixXd& lower) {
  const Eigen::Index p = m.rows();
  lower = Eigen::MatrixXd::Zero(p, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    double d = m(j, j) - lower.row(j).head(j).squaredNorm();
    if (!(d > 0.0) || !std::isfinite(d)) return static_cast<int>(j);
    d = std::sqrt(d);
    lower(j, j) = d;
    for (Eigen::Index i = j + 1; i < p; ++i) {
      lower(i, j) =
          (m(i, j) - lower.row(i).head(j).dot(lower.row(j).head(j))) / d;
    }
  }
  return -1;
}

// log(exp(a) + exp(b)) without overflow.
inline double log_sum_exp(double a, double b) {
  const double m = std::max(a, b);
  if (m == -std::numeric_limits<double>::infinity()) return m;
  return m + std::log(std::exp(a - m) + std::exp(b - m));
}

// log of the standard normal CDF, stable far into the left tail.
inline double log_normal_cdf(double t) {
  if (t > -37.0) {
    return std::log(0.5 * std::erfc(-t / std::sqrt(2.0)));
  }
  // Asymptotic expansion of the Mills ratio for the far left tail.
  const double t2 = t * t;
  const double series =
      1.0 - 1.0 / t2 + 3.0 / (t2 * t2) - 15.0 / (t2 * t2 * t2) +
      105.0 / (t2 * t2 * t2 * t2);
  return -0.5 * t2 - 0.5 * std::log(2.0 * kPi) - std::log(-t) +
         std::log(series);
}
}  // namespace detail

// Density of PG(1,k) at u > 0: the exponentially tilted alternating series
//   cosh(k/2) exp(-k^2 u / 2) * sum_{l>=0} (-1)^l (2l+1)/sqrt(2 pi u^3)
//                                           * exp(-(2l+1)^2 / (8u)).
// Partial sums bracket the limit once the terms decrease; evaluation stops
// when the next term is below 1e-14 of the running sum (cap `terms`).
inline double pg_density(double u, double k, int terms = 200) {
  if (!(u > 0.0)) throw std::invalid_argument("pg_density: u must be > 0");
  if (!(k >= 0.0) || !std::isfinite(k))
    throw std::invalid_argument("pg_density: k must be finite and >= 0");
  if (terms < 1) throw std::invalid_argument("pg_density: terms must be >= 1");

  const double base = 1.0 / std::sqrt(2.0 * detail::kPi * u * u * u);
  double sum = 0.0;
  double prev = std::numeric_limits<double>::infinity();
  for (int l = 0; l < terms; ++l) {
    const double m = 2.0 * l + 1.0;
    const double term = m * base * std::exp(-m * m / (8.0 * u));
    sum += (l % 2 == 0) ? term : -term;
    // Stop once terms are decreasing and negligible; the truncation error is
    // then bounded by the next (smaller) term.
    if (term <= prev && term < 1e-14 * std::abs(sum)) break;
    prev = term;
  }
  const double tilt = std::cosh(k / 2.0) * std::exp(-k * k * u / 2.0);
  return tilt * sum;
}

namespace detail {

// Coefficients a_n(x) of the alternating series for the PG rejection sampler,
// in the 4*PG scale. Piecewise form switches at the truncation point t.
inline double pg_series_coef(int n, double x, double trunc) {
  const double np = n + 0.5;
  if (x <= trunc) {
    return kPi * np * std::pow(2.0 / (kPi * x), 1.5) *
           std::exp(-2.0 * np * np / x);
  }
  return kPi * np * std::exp(-np * np * kPi * kPi * x / 2.0);
}

// Inverse-Gaussian(mu, lambda=1) draw (Michael-Schucany-Haas).
inline double sample_inverse_gaussian_unit(double mu, RngStream& rng) {
  const double nu = rng.normal();
  const double y = nu * nu;
  double x = mu + 0.5 * mu * mu * y -
             0.5 * mu * std::sqrt(4.0 * mu * y + mu * mu * y * y);
  if (!(x > 0.0)) x = std::numeric_limits<double>::min();
  if (rng.uniform() <= mu / (mu + x)) return x;
  return mu * mu / x;
}

// Draw from the inverse-Gaussian-like left piece of the PG proposal:
// density proportional to x^{-3/2} exp(-c^2 x / 2 - 1/(2x)) on (0, trunc].
inline double sample_pg_left_piece(double c, double trunc, RngStream& rng) {
  if (c * trunc < 1.0) {
    // mu = 1/c > trunc (or c == 0): invert a truncated Gamma(1/2, rate 1/2).
    const double a = 1.0 / trunc;
    for (;;) {
      // Proposal g = a + 2E targets the Gamma(1/2) tail on [a, inf).
      double g;
      for (;;) {
        g = a + 2.0 * rng.exponential();
        if (rng.uniform() <= std::sqrt(a / g)) break;
      }
      const double x = 1.0 / g;
      if (std::log(rng.uniform()) < -0.5 * c * c * x) return x;
    }
  }
  // mu = 1/c <= trunc: rejection from the untruncated inverse-Gaussian.
  const double mu = 1.0 / c;
  for (;;) {
    const double x = sample_inverse_gaussian_unit(mu, rng);
    if (x <= trunc) return x;
  }
}

}  // namespace detail

// Exact draw from PG(1,k) by the alternating-series accept/reject scheme on
// the two-piece proposal (truncated inverse-Gaussian below t*=0.64, truncated
// exponential above), evaluated in the 4*PG scale and divided by 4.
inline double sample_pg(double k, RngStream& rng) {
  if (!(k >= 0.0) || !std::isfinite(k))
    throw std::invalid_argument("sample_pg: k must be finite and >= 0");

  const double trunc = 0.64;
  const double c = k / 2.0;
  const double rate = detail::kPi * detail::kPi / 8.0 + c * c / 2.0;

  // Probability of proposing from the exponential (right) piece. Piece masses
  // share a cosh(c) factor which cancels:
  //   right ~ (pi/2) exp(-rate*trunc) / rate
  //   left  ~ 2 exp(-c) F_IG(trunc; mu=1/c, lambda=1)
  const double sqrt_t = std::sqrt(trunc);
  const double log_cdf_ig = detail::log_sum_exp(
      detail::log_normal_cdf((trunc * c - 1.0) / sqrt_t),
      2.0 * c + detail::log_normal_cdf(-(trunc * c + 1.0) / sqrt_t));
  const double log_right =
      std::log(detail::kPi / 2.0) - std::log(rate) - rate * trunc;
  const double log_left = std::log(2.0) - c + log_cdf_ig;
  const double p_right = 1.0 / (1.0 + std::exp(log_left - log_right));

  for (;;) {
    double x;
    if (rng.uniform() < p_right) {
      x = trunc + rng.exponential() / rate;
    } else {
      x = detail::sample_pg_left_piece(c, trunc, rng);
    }
    // Squeeze via the alternating partial sums of a_n(x).
    double s = detail::pg_series_coef(0, x, trunc);
    const double y = rng.uniform() * s;
    int n = 0;
    for (;;) {
      ++n;
      const double a = detail::pg_series_coef(n, x, trunc);
      if (n % 2 == 1) {
        s -= a;
        if (y <= s) return x / 4.0;
      } else {
        s += a;
        if (y > s) break;
      }
    }
  }
}

// Gamma(shape, scale) draw by Marsaglia-Tsang squeeze (shape >= 1), boosted
// with U^{1/shape} for shape < 1.
inline double sample_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("sample_gamma: shape and scale must be > 0");
  if (shape < 1.0) {
    const double g = sample_gamma(shape + 1.0, 1.0, rng);
    return scale * g * std::pow(rng.uniform(), 1.0 / shape);
  }
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x;
    double v;
    do {
      x = rng.normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = rng.uniform();
    if (u < 1.0 - 0.0331 * x * x * x * x) return scale * d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
      return scale * d * v;
  }
}

// Inverse-gamma draw with density proportional to x^{-shape-1} exp(-scale/x).
inline double sample_inverse_gamma(double shape, double scale, RngStream& rng) {
  if (!(shape > 0.0) || !(scale > 0.0))
    throw std::invalid_argument(
        "sample_inverse_gamma: shape and scale must be > 0");
  return scale / sample_gamma(shape, 1.0, rng);
}

// Multivariate normal draw: mean + L xi with L the lower Cholesky factor.
inline Eigen::VectorXd sample_mvn(const Eigen::VectorXd& mean,
                                  const Eigen::MatrixXd& covariance,
                                  RngStream& rng) {
  if (covariance.rows() != covariance.cols() ||
      covariance.rows() != mean.size())
    throw std::invalid_argument("sample_mvn: dimension mismatch");
  Eigen::MatrixXd lower;
  const int bad = detail::cholesky_lower(covariance, lower);
  if (bad >= 0)
    throw std::invalid_argument(
        "sample_mvn: covariance is not positive definite (leading minor of "
        "order " +
        std::to_string(bad + 1) + ")");
  Eigen::VectorXd xi(mean.size());
  for (Eigen::Index j = 0; j < xi.size(); ++j) xi(j) = rng.normal();
  return mean + lower * xi;
}

// Student-t draw by its inverse-gamma scale-mixture representation:
// gamma ~ IG(df/2, df scale^2 / 2), then location + sqrt(gamma) * normal.
inline double sample_student_t(double df, double location, double scale,
                               RngStream& rng) {
  if (!(df > 0.0) || !(scale > 0.0))
    throw std::invalid_argument("sample_student_t: df and scale must be > 0");
  const double gamma = sample_inverse_gamma(df / 2.0, df * scale * scale / 2.0, rng);
  return location + std::sqrt(gamma) * rng.normal();
}

}  // namespace sepbayes
