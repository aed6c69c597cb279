#pragma once

// Out-of-sample evaluation: Monte-Carlo success probabilities averaged over
// posterior draws, misclassification rate, Brier score (MSE form), and a
// Newton posterior-mode finder used as the point-estimate comparator.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sepbayes/dataset.hpp"
#include "sepbayes/link.hpp"
#include "sepbayes/priors.hpp"
#include "sepbayes/samplers.hpp"

namespace sepbayes {

// pi_hat_i = (1/S) sum_s f1(x_i' beta_s).
inline Eigen::VectorXd predict_mc(const Draws& draws,
                                  const Eigen::MatrixXd& X_test, Link link) {
  if (X_test.cols() != draws.p())
    throw std::invalid_argument(
        "predict_mc: test design has " + std::to_string(X_test.cols()) +
        " columns but draws have " + std::to_string(draws.p()));
  const Eigen::Index S = draws.S();
  if (S < 1) throw std::invalid_argument("predict_mc: no draws");
  Eigen::VectorXd probs = Eigen::VectorXd::Zero(X_test.rows());
  // Chunk the draws to keep the m x chunk linear-predictor block in cache.
  const Eigen::Index chunk = 512;
  for (Eigen::Index s0 = 0; s0 < S; s0 += chunk) {
    const Eigen::Index len = std::min(chunk, S - s0);
    const Eigen::MatrixXd T =
        X_test * draws.samples.middleRows(s0, len).transpose();
    for (Eigen::Index i = 0; i < T.rows(); ++i)
      for (Eigen::Index s = 0; s < len; ++s)
        probs(i) += std::exp(log_f1(T(i, s), link));
  }
  return probs / static_cast<double>(S);
}

// Success probability from a single coefficient vector (point-estimate path).
inline Eigen::VectorXd predict_point(const Eigen::VectorXd& beta,
                                     const Eigen::MatrixXd& X_test,
                                     Link link) {
  if (X_test.cols() != beta.size())
    throw std::invalid_argument("predict_point: dimension mismatch");
  Eigen::VectorXd probs(X_test.rows());
  const Eigen::VectorXd t = X_test * beta;
  for (Eigen::Index i = 0; i < t.size(); ++i)
    probs(i) = std::exp(log_f1(t(i), link));
  return probs;
}

// Fraction of observations with 1{pi_hat >= threshold} != y. Ties at the
// threshold classify as success.
inline double misclassification(const Eigen::VectorXd& probs,
                                const Eigen::VectorXi& y_test,
                                double threshold = 0.5) {
  if (probs.size() != y_test.size())
    throw std::invalid_argument("misclassification: length mismatch");
  if (probs.size() == 0)
    throw std::invalid_argument("misclassification: empty input");
  Eigen::Index wrong = 0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const int label = probs(i) >= threshold ? 1 : 0;
    if (label != y_test(i)) ++wrong;
  }
  return static_cast<double>(wrong) / static_cast<double>(probs.size());
}

// Brier score in MSE form: (1/m) sum (pi_hat_i - y_i)^2.
inline double brier(const Eigen::VectorXd& probs,
                    const Eigen::VectorXi& y_test) {
  if (probs.size() != y_test.size())
    throw std::invalid_argument("brier: length mismatch");
  if (probs.size() == 0) throw std::invalid_argument("brier: empty input");
  double acc = 0.0;
  for (Eigen::Index i = 0; i < probs.size(); ++i) {
    const double pi = probs(i);
    if (!(pi >= 0.0 && pi <= 1.0))
      throw std::invalid_argument("brier: probability outside [0,1]");
    const double diff = pi - static_cast<double>(y_test(i));
    acc += diff * diff;
  }
  return acc / static_cast<double>(probs.size());
}

struct MapResult {
  Eigen::VectorXd beta;
  bool converged = false;
  int iterations = 0;
  double grad_norm = 0.0;
  bool used_gradient_fallback = false;
};

namespace detail {

// Log posterior with gradient and Hessian.
inline double log_posterior_derivs(const Eigen::VectorXd& beta,
                                   const Dataset& d, const PriorSpec& prior,
                                   Link link, Eigen::VectorXd& grad,
                                   Eigen::MatrixXd& hess) {
  const Eigen::Index p = d.p();
  double value = log_prior_derivs(beta, prior, grad, hess);
  const Eigen::VectorXd t = d.X * beta;
  for (Eigen::Index i = 0; i < d.n(); ++i) {
    double d1, d2;
    if (d.y(i) == 1) {
      value += log_f1(t(i), link);
      log_f1_derivs(t(i), link, d1, d2);
    } else {
      value += log_f0(t(i), link);
      log_f0_derivs(t(i), link, d1, d2);
    }
    grad += d1 * d.X.row(i).transpose();
    hess += d2 * d.X.row(i).transpose() * d.X.row(i);
  }
  (void)p;
  return value;
}

}  // namespace detail

// Newton ascent on the log posterior with step halving; falls back to a
// normalized gradient step when the negated Hessian is not positive definite.
// Converged means the gradient infinity-norm dropped below tol.
inline MapResult map_estimate(const Dataset& d, const PriorSpec& prior,
                              Link link, double tol = 1e-8,
                              int max_iter = 200) {
  validate_dataset(d);
  validate_prior(prior, d.p());
  const Eigen::Index p = d.p();

  MapResult result;
  Eigen::VectorXd beta = std::visit(
      [p](const auto& pr) -> Eigen::VectorXd {
        using T = std::decay_t<decltype(pr)>;
        if constexpr (std::is_same_v<T, MultivariateT>)
          return pr.location;
        else
          return pr.locations;
      },
      prior);

  Eigen::VectorXd grad(p);
  Eigen::MatrixXd hess(p, p);
  double lp = detail::log_posterior_derivs(beta, d, prior, link, grad, hess);

  for (int iter = 1; iter <= max_iter; ++iter) {
    result.iterations = iter;
    result.grad_norm = grad.cwiseAbs().maxCoeff();
    if (result.grad_norm < tol) {
      result.converged = true;
      break;
    }
    Eigen::MatrixXd lower;
    Eigen::VectorXd direction;
    if (detail::cholesky_lower(-hess, lower) < 0) {
      const auto& L = lower.triangularView<Eigen::Lower>();
      direction = lower.transpose()
                      .triangularView<Eigen::Upper>()
                      .solve(L.solve(grad));
    } else {
      direction = grad / std::max(1.0, grad.norm());
      result.used_gradient_fallback = true;
    }
    double step = 1.0;
    bool moved = false;
    while (step > 1e-14) {
      const Eigen::VectorXd candidate = beta + step * direction;
      Eigen::VectorXd g2(p);
      Eigen::MatrixXd h2(p, p);
      const double lp2 =
          detail::log_posterior_derivs(candidate, d, prior, link, g2, h2);
      if (lp2 > lp) {
        beta = candidate;
        lp = lp2;
        grad = g2;
        hess = h2;
        moved = true;
        break;
      }
      step /= 2.0;
    }
    if (!moved) break;  // no ascent direction left at this scale
  }
  result.grad_norm = grad.cwiseAbs().maxCoeff();
  if (result.grad_norm < tol) result.converged = true;
  result.beta = beta;
  return result;
}

}  // namespace sepbayes
