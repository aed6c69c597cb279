#pragma once

// Posterior samplers: Polya-Gamma data-augmentation Gibbs for the logit link
// (independent Student-t, independent normal, and multivariate Student-t
// priors) and an adaptive random-walk Metropolis sampler for logit or probit.

#include <Eigen/Dense>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "sepbayes/dataset.hpp"
#include "sepbayes/distributions.hpp"
#include "sepbayes/link.hpp"
#include "sepbayes/priors.hpp"
#include "sepbayes/rng.hpp"

namespace sepbayes {

enum class ChainInit { Zeros, PriorDraw, User };

struct GibbsConfig {
  long iterations = 11000;   // total sweeps, including burn-in
  long burnin = 1000;
  long thin = 1;
  std::uint64_t seed = 0;
  int chains = 1;
  ChainInit init = ChainInit::Zeros;
  Eigen::VectorXd init_beta;  // used when init == ChainInit::User
};

inline void validate_config(const GibbsConfig& cfg) {
  if (cfg.iterations <= 0 || cfg.burnin < 0 || cfg.burnin >= cfg.iterations)
    throw std::invalid_argument(
        "sampler config: need 0 <= burnin < iterations");
  if (cfg.thin <= 0) throw std::invalid_argument("sampler config: thin >= 1");
  if ((cfg.iterations - cfg.burnin) / cfg.thin < 1)
    throw std::invalid_argument(
        "sampler config: no draws retained ((iterations - burnin)/thin < 1)");
  if (cfg.chains <= 0)
    throw std::invalid_argument("sampler config: chains >= 1");
}

struct Draws {
  Eigen::MatrixXd samples;      // S x p retained draws, chains stacked
  std::vector<int> chain_ids;   // chain id per retained row
  std::vector<std::string> names;
  GibbsConfig config;
  double wall_seconds = 0.0;
  std::optional<double> acceptance_rate;  // Metropolis only (post-burn-in)

  Eigen::Index S() const { return samples.rows(); }
  Eigen::Index p() const { return samples.cols(); }
};

// Thrown when a chain reaches a non-finite or astronomically large state.
class SamplerDivergence : public std::runtime_error {
 public:
  SamplerDivergence(int chain, long sweep, const Eigen::VectorXd& beta)
      : std::runtime_error(
            "sampler diverged on chain " + std::to_string(chain) +
            " at sweep " + std::to_string(sweep) +
            " (max |beta| = " + std::to_string(beta.cwiseAbs().maxCoeff()) +
            ")"),
        chain_(chain),
        sweep_(sweep),
        beta_(beta) {}
  int chain() const { return chain_; }
  long sweep() const { return sweep_; }
  const Eigen::VectorXd& beta() const { return beta_; }

 private:
  int chain_;
  long sweep_;
  Eigen::VectorXd beta_;
};

// Log posterior density (up to the normalizing constant of the evidence):
// sum_i log f_{y_i}(x_i' beta) + log p(beta).
inline double log_posterior(const Eigen::VectorXd& beta, const Dataset& d,
                            const PriorSpec& prior, Link link) {
  if (beta.size() != d.p())
    throw std::invalid_argument("log_posterior: beta dimension mismatch");
  validate_prior(prior, d.p());
  const Eigen::VectorXd t = d.X * beta;
  double ll = 0.0;
  for (Eigen::Index i = 0; i < d.n(); ++i)
    ll += d.y(i) == 1 ? log_f1(t(i), link) : log_f0(t(i), link);
  return ll + log_prior(beta, prior);
}

namespace detail {

// Divergence guard threshold for |beta_j|.
constexpr double kBetaGuard = 1e12;

// Gaussian full-conditional moments of delta = beta - mu in the PG-augmented
// model: precision P = X' diag(z) X + prior_precision and mean
// P^{-1} (X' ytilde - X' diag(z) X mu). Exposed for direct unit testing.
struct Step1Moments {
  Eigen::MatrixXd precision;
  Eigen::VectorXd mean_rhs;  // precision * mean
};

inline Step1Moments gibbs_step1_moments(const Eigen::MatrixXd& X,
                                        const Eigen::VectorXd& ytilde,
                                        const Eigen::VectorXd& z,
                                        const Eigen::MatrixXd& prior_precision,
                                        const Eigen::VectorXd& mu) {
  Step1Moments m;
  const Eigen::MatrixXd XtZX =
      X.transpose() * z.asDiagonal() * X;
  m.precision = XtZX + prior_precision;
  m.mean_rhs = X.transpose() * ytilde - XtZX * mu;
  return m;
}

// Inverse-gamma parameters of the mixing-variance full conditional
// gamma_j | beta ~ IG((df+1)/2, ((beta_j - mu_j)^2 + df sigma_j^2)/2).
inline std::pair<double, double> gamma_conditional_params(double beta_j,
                                                          double mu_j,
                                                          double sigma_j,
                                                          double df) {
  const double dev = beta_j - mu_j;
  return {(df + 1.0) / 2.0, (dev * dev + df * sigma_j * sigma_j) / 2.0};
}

// Draw delta ~ N(P^{-1} rhs, P^{-1}) given the precision P (Cholesky).
inline Eigen::VectorXd draw_gaussian_from_precision(
    const Eigen::MatrixXd& precision, const Eigen::VectorXd& rhs,
    RngStream& rng, int chain, long sweep) {
  Eigen::MatrixXd lower;
  const int bad = cholesky_lower(precision, lower);
  if (bad >= 0)
    throw std::runtime_error(
        "gibbs step 1: Cholesky failed at chain " + std::to_string(chain) +
        ", sweep " + std::to_string(sweep) + " (leading minor of order " +
        std::to_string(bad + 1) + ")");
  const auto& L = lower.triangularView<Eigen::Lower>();
  const auto& Lt = lower.transpose().triangularView<Eigen::Upper>();
  const Eigen::VectorXd w = L.solve(rhs);
  const Eigen::VectorXd mean = Lt.solve(w);
  Eigen::VectorXd xi(rhs.size());
  for (Eigen::Index j = 0; j < xi.size(); ++j) xi(j) = rng.normal();
  return mean + Lt.solve(xi);
}

inline void check_state(const Eigen::VectorXd& beta, int chain, long sweep) {
  if (!beta.allFinite() || beta.cwiseAbs().maxCoeff() > kBetaGuard)
    throw SamplerDivergence(chain, sweep, beta);
}

struct RetentionPlan {
  long per_chain;
  bool keep(long sweep, long burnin, long thin) const {
    return sweep > burnin && (sweep - burnin) % thin == 0;
  }
};

inline RetentionPlan retention_plan(const GibbsConfig& cfg) {
  return {(cfg.iterations - cfg.burnin) / cfg.thin};
}

// Shared harness: runs `chains` chains, each driving its own RngStream and
// per-sweep kernel, and stacks the retained draws.
template <typename InitFn, typename SweepFn>
Draws run_chains(const Dataset& d, const GibbsConfig& cfg,
                 const std::vector<std::string>& names, InitFn&& init_chain,
                 SweepFn&& sweep_chain) {
  validate_config(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  const RetentionPlan plan = retention_plan(cfg);
  const Eigen::Index p = d.p();

  Draws draws;
  draws.samples.resize(plan.per_chain * cfg.chains, p);
  draws.chain_ids.resize(
      static_cast<std::size_t>(plan.per_chain * cfg.chains));
  draws.names = names;
  draws.config = cfg;

  Eigen::Index row = 0;
  for (int chain = 0; chain < cfg.chains; ++chain) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(chain));
    auto state = init_chain(rng, chain);
    for (long sweep = 1; sweep <= cfg.iterations; ++sweep) {
      sweep_chain(state, rng, chain, sweep);
      if (plan.keep(sweep, cfg.burnin, cfg.thin)) {
        draws.samples.row(row) = state.beta.transpose();
        draws.chain_ids[static_cast<std::size_t>(row)] = chain;
        ++row;
      }
    }
  }
  draws.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
          .count();
  return draws;
}

inline Eigen::VectorXd initial_beta(const GibbsConfig& cfg, Eigen::Index p,
                                    const PriorSpec& prior, RngStream& rng) {
  switch (cfg.init) {
    case ChainInit::Zeros:
      return Eigen::VectorXd::Zero(p);
    case ChainInit::User:
      if (cfg.init_beta.size() != p)
        throw std::invalid_argument("init vector dimension mismatch");
      return cfg.init_beta;
    case ChainInit::PriorDraw: {
      Eigen::VectorXd beta(p);
      if (const auto* it = std::get_if<IndependentT>(&prior)) {
        for (Eigen::Index j = 0; j < p; ++j)
          beta(j) = sample_student_t(it->df, it->locations(j), it->scales(j), rng);
      } else if (const auto* nn = std::get_if<IndependentNormal>(&prior)) {
        for (Eigen::Index j = 0; j < p; ++j)
          beta(j) = nn->locations(j) + nn->scales(j) * rng.normal();
      } else {
        const auto& mt = std::get<MultivariateT>(prior);
        const double phi =
            sample_inverse_gamma(mt.df / 2.0, mt.df / 2.0, rng);
        beta = sample_mvn(mt.location, phi * mt.scale_matrix, rng);
      }
      return beta;
    }
  }
  return Eigen::VectorXd::Zero(p);
}

}  // namespace detail

// Gibbs sampler for independent Student-t priors under the logit link.
// Nonzero prior locations are handled by shifting beta -> beta - mu, which
// keeps step 1 Gaussian with an offset in the likelihood term. Each sweep:
//   1. delta | gamma, z, y ~ N with precision X' diag(z) X + diag(1/gamma);
//   2. gamma_j | beta ~ IG((df+1)/2, ((beta_j - mu_j)^2 + df sigma_j^2)/2);
//   3. z_i | beta ~ PG(1, |x_i' beta|).
inline Draws gibbs_independent_t(const Dataset& d, const IndependentT& prior,
                                 const GibbsConfig& cfg) {
  if (d.n() > 0) validate_dataset(d);
  const Eigen::Index p = d.p();
  if (p < 1) throw std::invalid_argument("gibbs: p >= 1 required");
  validate_prior(PriorSpec(prior), p);
  const Eigen::VectorXd ytilde =
      (d.y.cast<double>().array() - 0.5).matrix();
  const Eigen::VectorXd& mu = prior.locations;

  struct State {
    Eigen::VectorXd beta;
    Eigen::VectorXd gamma;
    Eigen::VectorXd z;
  };
  const PriorSpec spec(prior);

  return detail::run_chains(
      d, cfg, d.names,
      [&](RngStream& rng, int) {
        State s;
        s.beta = detail::initial_beta(cfg, p, spec, rng);
        s.gamma = prior.scales.array().square();
        s.z.resize(d.n());
        for (Eigen::Index i = 0; i < d.n(); ++i) s.z(i) = sample_pg(0.0, rng);
        return s;
      },
      [&](State& s, RngStream& rng, int chain, long sweep) {
        const Eigen::MatrixXd prior_prec =
            s.gamma.cwiseInverse().asDiagonal();
        const detail::Step1Moments m =
            detail::gibbs_step1_moments(d.X, ytilde, s.z, prior_prec, mu);
        const Eigen::VectorXd delta = detail::draw_gaussian_from_precision(
            m.precision, m.mean_rhs, rng, chain, sweep);
        s.beta = mu + delta;
        detail::check_state(s.beta, chain, sweep);
        for (Eigen::Index j = 0; j < p; ++j) {
          const auto [shape, scale] = detail::gamma_conditional_params(
              s.beta(j), mu(j), prior.scales(j), prior.df);
          s.gamma(j) = sample_inverse_gamma(shape, scale, rng);
        }
        const Eigen::VectorXd t = d.X * s.beta;
        for (Eigen::Index i = 0; i < d.n(); ++i)
          s.z(i) = sample_pg(std::abs(t(i)), rng);
      });
}

// Gibbs sampler for independent normal priors (steps 1 and 3 only; the prior
// variances are fixed).
inline Draws gibbs_normal(const Dataset& d, const IndependentNormal& prior,
                          const GibbsConfig& cfg) {
  if (d.n() > 0) validate_dataset(d);
  const Eigen::Index p = d.p();
  if (p < 1) throw std::invalid_argument("gibbs: p >= 1 required");
  validate_prior(PriorSpec(prior), p);
  const Eigen::VectorXd ytilde =
      (d.y.cast<double>().array() - 0.5).matrix();
  const Eigen::VectorXd& mu = prior.locations;
  const Eigen::MatrixXd prior_prec =
      prior.scales.array().square().inverse().matrix().asDiagonal();

  struct State {
    Eigen::VectorXd beta;
    Eigen::VectorXd z;
  };
  const PriorSpec spec(prior);

  return detail::run_chains(
      d, cfg, d.names,
      [&](RngStream& rng, int) {
        State s;
        s.beta = detail::initial_beta(cfg, p, spec, rng);
        s.z.resize(d.n());
        for (Eigen::Index i = 0; i < d.n(); ++i) s.z(i) = sample_pg(0.0, rng);
        return s;
      },
      [&](State& s, RngStream& rng, int chain, long sweep) {
        const detail::Step1Moments m =
            detail::gibbs_step1_moments(d.X, ytilde, s.z, prior_prec, mu);
        const Eigen::VectorXd delta = detail::draw_gaussian_from_precision(
            m.precision, m.mean_rhs, rng, chain, sweep);
        s.beta = mu + delta;
        detail::check_state(s.beta, chain, sweep);
        const Eigen::VectorXd t = d.X * s.beta;
        for (Eigen::Index i = 0; i < d.n(); ++i)
          s.z(i) = sample_pg(std::abs(t(i)), rng);
      });
}

// Gibbs sampler for a multivariate Student-t prior: a single mixing scalar
// phi with beta | phi, z, y Gaussian (precision X' diag(z) X + (phi Sigma)^-1)
// and phi | beta ~ IG((df+p)/2, (df + (beta-mu)' Sigma^-1 (beta-mu))/2).
inline Draws gibbs_multivariate_t(const Dataset& d, const MultivariateT& prior,
                                  const GibbsConfig& cfg) {
  if (d.n() > 0) validate_dataset(d);
  const Eigen::Index p = d.p();
  if (p < 1) throw std::invalid_argument("gibbs: p >= 1 required");
  validate_prior(PriorSpec(prior), p);
  const Eigen::VectorXd ytilde =
      (d.y.cast<double>().array() - 0.5).matrix();
  const Eigen::VectorXd& mu = prior.location;
  const detail::SpdInfo sigma = detail::spd_info(prior.scale_matrix, "gibbs");

  struct State {
    Eigen::VectorXd beta;
    double phi = 1.0;
    Eigen::VectorXd z;
  };
  const PriorSpec spec(prior);

  return detail::run_chains(
      d, cfg, d.names,
      [&](RngStream& rng, int) {
        State s;
        s.beta = detail::initial_beta(cfg, p, spec, rng);
        s.phi = 1.0;
        s.z.resize(d.n());
        for (Eigen::Index i = 0; i < d.n(); ++i) s.z(i) = sample_pg(0.0, rng);
        return s;
      },
      [&](State& s, RngStream& rng, int chain, long sweep) {
        const Eigen::MatrixXd prior_prec = sigma.inverse / s.phi;
        const detail::Step1Moments m =
            detail::gibbs_step1_moments(d.X, ytilde, s.z, prior_prec, mu);
        const Eigen::VectorXd delta = detail::draw_gaussian_from_precision(
            m.precision, m.mean_rhs, rng, chain, sweep);
        s.beta = mu + delta;
        detail::check_state(s.beta, chain, sweep);
        const double q = delta.dot(sigma.inverse * delta);
        s.phi = sample_inverse_gamma((prior.df + p) / 2.0,
                                     (prior.df + q) / 2.0, rng);
        const Eigen::VectorXd t = d.X * s.beta;
        for (Eigen::Index i = 0; i < d.n(); ++i)
          s.z(i) = sample_pg(std::abs(t(i)), rng);
      });
}

// Random-walk Metropolis with a spherical Gaussian proposal. The step scale
// adapts by Robbins-Monro toward 23.4% acceptance during burn-in only and is
// frozen afterwards, so the retained draws target the exact posterior.
inline Draws rw_metropolis(const Dataset& d, const PriorSpec& prior, Link link,
                           const GibbsConfig& cfg,
                           std::optional<double> step_scale = std::nullopt) {
  validate_dataset(d);
  const Eigen::Index p = d.p();
  validate_prior(prior, p);

  struct State {
    Eigen::VectorXd beta;
    double lp = 0.0;
    double log_s = 0.0;
    long accepted_post = 0;
    long total_post = 0;
  };

  long total_accepted = 0;
  long total_counted = 0;

  Draws draws = detail::run_chains(
      d, cfg, d.names,
      [&](RngStream& rng, int) {
        State s;
        s.beta = detail::initial_beta(cfg, p, prior, rng);
        s.lp = log_posterior(s.beta, d, prior, link);
        if (!std::isfinite(s.lp))
          throw std::invalid_argument(
              "rw_metropolis: log posterior is not finite at initialization");
        s.log_s = std::log(step_scale.value_or(
            2.38 / std::sqrt(static_cast<double>(p))));
        return s;
      },
      [&](State& s, RngStream& rng, int chain, long sweep) {
        const double scale = std::exp(s.log_s);
        Eigen::VectorXd proposal(p);
        for (Eigen::Index j = 0; j < p; ++j)
          proposal(j) = s.beta(j) + scale * rng.normal();
        const double lp_new = log_posterior(proposal, d, prior, link);
        const double log_ratio = lp_new - s.lp;
        const bool accept = std::log(rng.uniform()) < log_ratio;
        if (accept) {
          s.beta = proposal;
          s.lp = lp_new;
        }
        detail::check_state(s.beta, chain, sweep);
        if (sweep <= cfg.burnin) {
          const double acc_prob = std::min(1.0, std::exp(log_ratio));
          s.log_s += (acc_prob - 0.234) / std::pow(static_cast<double>(sweep),
                                                   0.6);
        } else {
          ++s.total_post;
          if (accept) ++s.accepted_post;
          if (sweep == cfg.iterations) {
            total_accepted += s.accepted_post;
            total_counted += s.total_post;
          }
        }
      });
  if (total_counted > 0)
    draws.acceptance_rate =
        static_cast<double>(total_accepted) / static_cast<double>(total_counted);
  return draws;
}

}  // namespace sepbayes
