#pragma once

// MCMC chain diagnostics: running means, autocorrelation, effective sample
// size (Geyer initial-positive-sequence truncation), and posterior summaries
// with Monte Carlo standard errors.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <json.hpp>
#include <stdexcept>
#include <string>
#include <vector>

#include "sepbayes/samplers.hpp"
#include "sepbayes/separation.hpp"

namespace sepbayes {

// running_mean(x)[t] = mean(x[0..t]).
inline Eigen::VectorXd running_mean(const Eigen::VectorXd& series) {
  if (series.size() < 1)
    throw std::invalid_argument("running_mean: empty series");
  Eigen::VectorXd out(series.size());
  double acc = 0.0;
  for (Eigen::Index t = 0; t < series.size(); ++t) {
    acc += series(t);
    out(t) = acc / static_cast<double>(t + 1);
  }
  return out;
}

// Standard biased ACF estimate; lag 0 equals 1.
inline Eigen::VectorXd autocorrelation(const Eigen::VectorXd& series,
                                       int max_lag) {
  const Eigen::Index S = series.size();
  if (max_lag < 0) throw std::invalid_argument("autocorrelation: max_lag >= 0");
  if (S <= max_lag)
    throw std::invalid_argument("autocorrelation: need series longer than max_lag");
  const Eigen::VectorXd d = series.array() - series.mean();
  const double denom = d.squaredNorm();
  if (!(denom > 0.0))
    throw std::invalid_argument("autocorrelation: series is constant");
  Eigen::VectorXd rho(max_lag + 1);
  for (int k = 0; k <= max_lag; ++k)
    rho(k) = d.head(S - k).dot(d.tail(S - k)) / denom;
  return rho;
}

// Effective sample size S / (1 + 2 sum rho_k), truncating the sum at the
// first nonpositive pairwise sum rho_{2m} + rho_{2m+1}. Reported value is
// capped at 10*S (anti-correlated chains can push the raw estimate higher).
inline double ess(const Eigen::VectorXd& series) {
  const Eigen::Index S = series.size();
  if (S < 10) throw std::invalid_argument("ess: need at least 10 samples");
  const Eigen::VectorXd d = series.array() - series.mean();
  const double denom = d.squaredNorm();
  if (!(denom > 0.0)) throw std::invalid_argument("ess: series is constant");

  const auto rho = [&](Eigen::Index k) {
    return d.head(S - k).dot(d.tail(S - k)) / denom;
  };
  // Practical cap on how deep we scan; beyond it the estimate is truncated
  // conservatively (longer correlation only lowers the true ESS further).
  const Eigen::Index max_pair = std::min<Eigen::Index>((S - 1) / 2, 10000);
  double cum = 0.0;
  for (Eigen::Index m = 0; m <= max_pair; ++m) {
    const double g = rho(2 * m) + (2 * m + 1 < S ? rho(2 * m + 1) : 0.0);
    if (g <= 0.0) break;
    cum += g;
  }
  const double tau = 2.0 * cum - 1.0;
  const double S_d = static_cast<double>(S);
  if (!(tau > 0.0)) return 10.0 * S_d;
  return std::min(S_d / tau, 10.0 * S_d);
}

struct CoefficientSummary {
  std::string name;
  double mean = 0.0;
  double sd = 0.0;
  double q025 = 0.0;
  double q50 = 0.0;
  double q975 = 0.0;
  double ess_value = 0.0;
  double mcse = 0.0;
  std::vector<double> acf;  // lags 0..max_lag, averaged over chains
  Existence existence = Existence::Exists;
  std::string annotation;
};

struct ChainSummary {
  std::vector<CoefficientSummary> coefficients;
  Eigen::Index total_draws = 0;
  int chains = 1;
  // Per-chain means, indexed [chain][coefficient].
  std::vector<std::vector<double>> per_chain_means;
};

namespace detail {

// Linear-interpolation sample quantile on a sorted copy.
inline double quantile_sorted(const std::vector<double>& sorted, double q) {
  const std::size_t n = sorted.size();
  if (n == 1) return sorted[0];
  const double h = q * static_cast<double>(n - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, n - 1);
  const double w = h - static_cast<double>(lo);
  return (1.0 - w) * sorted[lo] + w * sorted[hi];
}

}  // namespace detail

// Pooled and per-chain summary of retained draws. Coefficients whose
// existence verdict is NotExists are annotated: their sample average is not
// an estimator of a finite quantity. ESS per coefficient is the sum of the
// per-chain values, capped at the total draw count so MC-SE >= sd/sqrt(S).
inline ChainSummary summarize(const Draws& draws,
                              const std::vector<ExistenceVerdict>& existence,
                              int acf_max_lag = 100) {
  const Eigen::Index S = draws.S();
  const Eigen::Index p = draws.p();
  if (S < 1) throw std::invalid_argument("summarize: no draws");
  if (!existence.empty() &&
      static_cast<Eigen::Index>(existence.size()) != p)
    throw std::invalid_argument(
        "summarize: existence verdicts do not match draw dimension");

  // Split rows by chain.
  std::vector<std::vector<Eigen::Index>> chain_rows;
  for (Eigen::Index r = 0; r < S; ++r) {
    const int c = draws.chain_ids.empty()
                      ? 0
                      : draws.chain_ids[static_cast<std::size_t>(r)];
    if (static_cast<std::size_t>(c) >= chain_rows.size())
      chain_rows.resize(static_cast<std::size_t>(c) + 1);
    chain_rows[static_cast<std::size_t>(c)].push_back(r);
  }
  const int n_chains = static_cast<int>(chain_rows.size());

  ChainSummary summary;
  summary.total_draws = S;
  summary.chains = n_chains;
  summary.per_chain_means.assign(
      static_cast<std::size_t>(n_chains),
      std::vector<double>(static_cast<std::size_t>(p), 0.0));

  const int lag =
      static_cast<int>(std::min<Eigen::Index>(acf_max_lag,
                                              S / n_chains > 1
                                                  ? S / n_chains - 1
                                                  : 0));

  for (Eigen::Index j = 0; j < p; ++j) {
    CoefficientSummary cs;
    cs.name = j < static_cast<Eigen::Index>(draws.names.size())
                  ? draws.names[static_cast<std::size_t>(j)]
                  : "beta" + std::to_string(j);
    const Eigen::VectorXd col = draws.samples.col(j);
    cs.mean = col.mean();
    cs.sd = S > 1 ? std::sqrt((col.array() - cs.mean).square().sum() /
                              static_cast<double>(S - 1))
                  : 0.0;
    std::vector<double> sorted(col.data(), col.data() + S);
    std::sort(sorted.begin(), sorted.end());
    cs.q025 = detail::quantile_sorted(sorted, 0.025);
    cs.q50 = detail::quantile_sorted(sorted, 0.50);
    cs.q975 = detail::quantile_sorted(sorted, 0.975);

    double ess_total = 0.0;
    std::vector<double> acf_mean(static_cast<std::size_t>(lag) + 1, 0.0);
    try {
      for (int c = 0; c < n_chains; ++c) {
        const auto& rows = chain_rows[static_cast<std::size_t>(c)];
        Eigen::VectorXd series(static_cast<Eigen::Index>(rows.size()));
        for (std::size_t r = 0; r < rows.size(); ++r)
          series(static_cast<Eigen::Index>(r)) = col(rows[r]);
        summary.per_chain_means[static_cast<std::size_t>(c)]
                               [static_cast<std::size_t>(j)] = series.mean();
        // Chains too short for an autocorrelation-based estimate contribute
        // their raw length (treated as independent draws).
        ess_total += series.size() >= 10 ? ess(series)
                                         : static_cast<double>(series.size());
        if (lag > 0) {
          const Eigen::VectorXd a = autocorrelation(series, lag);
          for (int k = 0; k <= lag; ++k)
            acf_mean[static_cast<std::size_t>(k)] += a(k) / n_chains;
        }
      }
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument("summarize: coefficient '" + cs.name +
                                  "': " + e.what());
    }
    cs.ess_value = std::min(ess_total, static_cast<double>(S));
    cs.mcse = cs.sd / std::sqrt(cs.ess_value);
    cs.acf = acf_mean;
    if (!existence.empty()) {
      cs.existence = existence[static_cast<std::size_t>(j)].verdict;
      if (cs.existence == Existence::NotExists)
        cs.annotation =
            "posterior mean does not exist - reported average is not an "
            "estimator of a finite quantity";
    }
    summary.coefficients.push_back(std::move(cs));
  }
  return summary;
}

inline nlohmann::ordered_json to_json(const ChainSummary& summary) {
  nlohmann::ordered_json j;
  j["total_draws"] = summary.total_draws;
  j["chains"] = summary.chains;
  j["coefficients"] = nlohmann::ordered_json::array();
  for (const auto& c : summary.coefficients) {
    nlohmann::ordered_json cj;
    cj["name"] = c.name;
    cj["mean"] = c.mean;
    cj["sd"] = c.sd;
    cj["q2.5"] = c.q025;
    cj["q50"] = c.q50;
    cj["q97.5"] = c.q975;
    cj["ess"] = c.ess_value;
    cj["mcse"] = c.mcse;
    cj["existence"] = existence_name(c.existence);
    if (!c.annotation.empty()) cj["annotation"] = c.annotation;
    cj["acf"] = c.acf;
    j["coefficients"].push_back(cj);
  }
  j["per_chain_means"] = summary.per_chain_means;
  return j;
}

}  // namespace sepbayes
