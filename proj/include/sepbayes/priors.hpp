#pragma once

// Prior specifications for the regression coefficients: independent Student-t
// (df=1 gives Cauchy), independent normal, and multivariate Student-t, plus
// log-density evaluation with first and second derivatives.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <variant>

#include "sepbayes/distributions.hpp"

namespace sepbayes {

struct IndependentT {
  double df = 1.0;
  Eigen::VectorXd locations;
  Eigen::VectorXd scales;
};

struct IndependentNormal {
  Eigen::VectorXd locations;
  Eigen::VectorXd scales;
};

struct MultivariateT {
  double df = 1.0;
  Eigen::VectorXd location;
  Eigen::MatrixXd scale_matrix;
};

using PriorSpec = std::variant<IndependentT, IndependentNormal, MultivariateT>;

inline Eigen::Index prior_dimension(const PriorSpec& prior) {
  return std::visit(
      [](const auto& pr) -> Eigen::Index {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, MultivariateT>)
          return pr.location.size();
        else
          return pr.locations.size();
      },
      prior);
}

inline void validate_prior(const PriorSpec& prior, Eigen::Index p) {
  std::visit(
      [p](const auto& pr) {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, MultivariateT>) {
          if (pr.location.size() != p || pr.scale_matrix.rows() != p ||
              pr.scale_matrix.cols() != p)
            throw std::invalid_argument("prior dimension mismatch");
          if (!(pr.df > 0.0))
            throw std::invalid_argument("prior df must be > 0");
          Eigen::MatrixXd lower;
          const int bad = detail::cholesky_lower(pr.scale_matrix, lower);
          if (bad >= 0)
            throw std::invalid_argument(
                "prior scale matrix is not positive definite (leading minor "
                "of order " +
                std::to_string(bad + 1) + ")");
        } else {
          if (pr.locations.size() != p || pr.scales.size() != p)
            throw std::invalid_argument("prior dimension mismatch");
          if ((pr.scales.array() <= 0.0).any())
            throw std::invalid_argument("prior scales must be > 0");
          if constexpr (std::is_same_v<T, IndependentT>) {
            if (!(pr.df > 0.0))
              throw std::invalid_argument("prior df must be > 0");
          }
        }
      },
      prior);
}

namespace detail {

inline double log_student_t_pdf(double x, double df, double loc, double scale) {
  const double u = (x - loc) / scale;
  return std::lgamma((df + 1.0) / 2.0) - std::lgamma(df / 2.0) -
         0.5 * std::log(df * kPi) - std::log(scale) -
         (df + 1.0) / 2.0 * std::log1p(u * u / df);
}

inline double log_normal_pdf(double x, double loc, double scale) {
  const double u = (x - loc) / scale;
  return -0.5 * std::log(2.0 * kPi) - std::log(scale) - 0.5 * u * u;
}

// Cholesky-based inverse and log-determinant of an SPD matrix.
struct SpdInfo {
  Eigen::MatrixXd inverse;
  double log_det = 0.0;
};

inline SpdInfo spd_info(const Eigen::MatrixXd& m, const char* what) {
  Eigen::MatrixXd lower;
  const int bad = cholesky_lower(m, lower);
  if (bad >= 0)
    throw std::invalid_argument(std::string(what) +
                                ": matrix is not positive definite (leading "
                                "minor of order " +
                                std::to_string(bad + 1) + ")");
  SpdInfo info;
  info.log_det = 2.0 * lower.diagonal().array().log().sum();
  const Eigen::MatrixXd identity =
      Eigen::MatrixXd::Identity(m.rows(), m.cols());
  const Eigen::MatrixXd linv =
      lower.triangularView<Eigen::Lower>().solve(identity);
  info.inverse = linv.transpose() * linv;
  return info;
}

}  // namespace detail

// Log prior density at beta (with full normalizing constants).
inline double log_prior(const Eigen::VectorXd& beta, const PriorSpec& prior) {
  validate_prior(prior, beta.size());
  return std::visit(
      [&beta](const auto& pr) -> double {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, IndependentT>) {
          double s = 0.0;
          for (Eigen::Index j = 0; j < beta.size(); ++j)
            s += detail::log_student_t_pdf(beta(j), pr.df, pr.locations(j),
                                           pr.scales(j));
          return s;
        } else if constexpr (std::is_same_v<T, IndependentNormal>) {
          double s = 0.0;
          for (Eigen::Index j = 0; j < beta.size(); ++j)
            s += detail::log_normal_pdf(beta(j), pr.locations(j), pr.scales(j));
          return s;
        } else {
          const Eigen::Index p = beta.size();
          const detail::SpdInfo info =
              detail::spd_info(pr.scale_matrix, "log_prior");
          const Eigen::VectorXd d = beta - pr.location;
          const double q = d.dot(info.inverse * d);
          return std::lgamma((pr.df + p) / 2.0) - std::lgamma(pr.df / 2.0) -
                 0.5 * p * std::log(pr.df * detail::kPi) - 0.5 * info.log_det -
                 (pr.df + p) / 2.0 * std::log1p(q / pr.df);
        }
      },
      prior);
}

// Log prior with gradient and Hessian (for the Newton mode finder).
inline double log_prior_derivs(const Eigen::VectorXd& beta,
                               const PriorSpec& prior, Eigen::VectorXd& grad,
                               Eigen::MatrixXd& hess) {
  validate_prior(prior, beta.size());
  const Eigen::Index p = beta.size();
  grad = Eigen::VectorXd::Zero(p);
  hess = Eigen::MatrixXd::Zero(p, p);
  return std::visit(
      [&](const auto& pr) -> double {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, IndependentT>) {
          double s = 0.0;
          for (Eigen::Index j = 0; j < p; ++j) {
            const double sc = pr.scales(j);
            const double u = (beta(j) - pr.locations(j)) / sc;
            const double v = pr.df;
            s += detail::log_student_t_pdf(beta(j), v, pr.locations(j), sc);
            grad(j) = -(v + 1.0) * u / ((v + u * u) * sc);
            hess(j, j) = -(v + 1.0) * (v - u * u) /
                         ((v + u * u) * (v + u * u) * sc * sc);
          }
          return s;
        } else if constexpr (std::is_same_v<T, IndependentNormal>) {
          double s = 0.0;
          for (Eigen::Index j = 0; j < p; ++j) {
            const double sc = pr.scales(j);
            const double u = (beta(j) - pr.locations(j)) / sc;
            s += detail::log_normal_pdf(beta(j), pr.locations(j), sc);
            grad(j) = -u / sc;
            hess(j, j) = -1.0 / (sc * sc);
          }
          return s;
        } else {
          const detail::SpdInfo info =
              detail::spd_info(pr.scale_matrix, "log_prior");
          const Eigen::VectorXd d = beta - pr.location;
          const Eigen::VectorXd sid = info.inverse * d;
          const double q = d.dot(sid);
          const double v = pr.df;
          const double w = (v + p) / (v + q);
          grad = -w * sid;
          hess = -w * info.inverse +
                 2.0 * (v + p) / ((v + q) * (v + q)) * sid * sid.transpose();
          return std::lgamma((v + p) / 2.0) - std::lgamma(v / 2.0) -
                 0.5 * p * std::log(v * detail::kPi) - 0.5 * info.log_det -
                 (v + p) / 2.0 * std::log1p(q / v);
        }
      },
      prior);
}

}  // namespace sepbayes
