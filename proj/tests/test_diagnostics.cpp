#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <sepbayes/diagnostics.hpp>
#include <sepbayes/rng.hpp>
#include <sepbayes/samplers.hpp>
#include <sepbayes/separation.hpp>

using sepbayes::autocorrelation;
using sepbayes::ChainSummary;
using sepbayes::Draws;
using sepbayes::ess;
using sepbayes::Existence;
using sepbayes::ExistenceVerdict;
using sepbayes::running_mean;
using sepbayes::summarize;

namespace {

Eigen::VectorXd iid_normal(Eigen::Index S, std::uint64_t seed) {
  sepbayes::RngStream rng(seed, 0);
  Eigen::VectorXd x(S);
  for (Eigen::Index t = 0; t < S; ++t) x(t) = rng.normal();
  return x;
}

// Stationary AR(1) with autocorrelation rho at lag 1.
Eigen::VectorXd ar1(Eigen::Index S, double rho, std::uint64_t seed) {
  sepbayes::RngStream rng(seed, 0);
  Eigen::VectorXd x(S);
  const double innovation_sd = std::sqrt(1.0 - rho * rho);
  x(0) = rng.normal();
  for (Eigen::Index t = 1; t < S; ++t)
    x(t) = rho * x(t - 1) + innovation_sd * rng.normal();
  return x;
}

// Hand-built single-chain Draws container over explicit sample values.
Draws make_draws(const std::vector<std::vector<double>>& rows,
                 const std::vector<std::string>& names, int chains = 1) {
  Draws d;
  const Eigen::Index S = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(rows.front().size());
  d.samples.resize(S, p);
  for (Eigen::Index i = 0; i < S; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      d.samples(i, j) = rows[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)];
  d.chain_ids.resize(static_cast<std::size_t>(S));
  const Eigen::Index per = S / chains;
  for (Eigen::Index i = 0; i < S; ++i)
    d.chain_ids[static_cast<std::size_t>(i)] = static_cast<int>(i / per);
  d.names = names;
  return d;
}

}  // namespace

TEST_CASE("running mean of 1,2,3 is 1, 1.5, 2") {
  Eigen::VectorXd x(3);
  x << 1.0, 2.0, 3.0;
  const Eigen::VectorXd m = running_mean(x);
  REQUIRE(m.size() == 3);
  CHECK(m(0) == Catch::Approx(1.0));
  CHECK(m(1) == Catch::Approx(1.5));
  CHECK(m(2) == Catch::Approx(2.0));
}

TEST_CASE("running mean of a constant series is that constant") {
  const Eigen::VectorXd x = Eigen::VectorXd::Constant(50, -3.25);
  const Eigen::VectorXd m = running_mean(x);
  CHECK((m.array() - (-3.25)).abs().maxCoeff() < 1e-14);
}

TEST_CASE("final running mean equals the overall mean") {
  const Eigen::VectorXd x = iid_normal(1000, 5);
  const Eigen::VectorXd m = running_mean(x);
  CHECK(std::abs(m(999) - x.mean()) < 1e-12);
}

TEST_CASE("running mean rejects an empty series") {
  CHECK_THROWS_AS(running_mean(Eigen::VectorXd()), std::invalid_argument);
}

TEST_CASE("autocorrelation of iid noise is near zero beyond lag zero") {
  const Eigen::Index S = 20000;
  const Eigen::VectorXd x = iid_normal(S, 6);
  const Eigen::VectorXd rho = autocorrelation(x, 20);
  REQUIRE(rho.size() == 21);
  CHECK(rho(0) == Catch::Approx(1.0));
  const double band = 3.0 / std::sqrt(static_cast<double>(S));
  for (int k = 1; k <= 20; ++k) {
    INFO("lag " << k << " rho " << rho(k));
    CHECK(std::abs(rho(k)) < band);
  }
}

TEST_CASE("autocorrelation of an AR(1) chain matches rho at lag one") {
  const Eigen::VectorXd x = ar1(100000, 0.9, 7);
  const Eigen::VectorXd rho = autocorrelation(x, 5);
  CHECK(rho(1) == Catch::Approx(0.9).margin(0.05));
  CHECK(rho(2) == Catch::Approx(0.81).margin(0.05));
}

TEST_CASE("autocorrelation input validation") {
  const Eigen::VectorXd x = iid_normal(100, 8);
  CHECK_THROWS_AS(autocorrelation(x, -1), std::invalid_argument);
  CHECK_THROWS_AS(autocorrelation(x, 100), std::invalid_argument);
  CHECK_NOTHROW(autocorrelation(x, 99));
  CHECK_THROWS_AS(autocorrelation(Eigen::VectorXd::Zero(100), 10),
                  std::invalid_argument);
}

TEST_CASE("ess of iid noise is close to the sample size") {
  const Eigen::Index S = 50000;
  const double e = ess(iid_normal(S, 9));
  CHECK(e > 0.9 * static_cast<double>(S));
  CHECK(e < 1.1 * static_cast<double>(S));
}

TEST_CASE("ess of an AR(1) chain matches the analytic ratio") {
  // ESS/S -> (1 - rho)/(1 + rho) = 1/19 for rho = 0.9.
  const Eigen::Index S = 100000;
  const double e = ess(ar1(S, 0.9, 10));
  const double ratio = e / static_cast<double>(S);
  INFO("ESS/S = " << ratio);
  CHECK(ratio == Catch::Approx(1.0 / 19.0).epsilon(0.20));
}

TEST_CASE("ess of an anticorrelated chain is capped at ten times the size") {
  // A perfectly alternating series has negative lag-1 autocorrelation; the
  // truncation rule would otherwise report an unbounded value.
  Eigen::VectorXd x(1000);
  for (Eigen::Index t = 0; t < x.size(); ++t)
    x(t) = (t % 2 == 0) ? 1.0 : -1.0;
  CHECK(ess(x) == Catch::Approx(10000.0));
}

TEST_CASE("ess input validation") {
  CHECK_THROWS_AS(ess(Eigen::VectorXd::Zero(9)), std::invalid_argument);
  CHECK_THROWS_AS(ess(Eigen::VectorXd::Constant(100, 2.0)),
                  std::invalid_argument);
}

TEST_CASE("acf and ess are invariant under affine transformations") {
  const Eigen::VectorXd x = ar1(20000, 0.6, 11);
  const Eigen::VectorXd y = (3.5 * x.array() - 100.0).matrix();
  const Eigen::VectorXd rx = autocorrelation(x, 30);
  const Eigen::VectorXd ry = autocorrelation(y, 30);
  CHECK((rx - ry).cwiseAbs().maxCoeff() < 1e-10);
  CHECK(ess(x) == Catch::Approx(ess(y)).epsilon(1e-10));
}

TEST_CASE("summarize reports exact moments for a two-draw chain") {
  const Draws d = make_draws({{0.0}, {2.0}}, {"beta0"});
  const ChainSummary s = summarize(d, {}, 0);
  REQUIRE(s.coefficients.size() == 1);
  const auto& c = s.coefficients.front();
  CHECK(c.name == "beta0");
  CHECK(c.mean == Catch::Approx(1.0));
  CHECK(c.sd == Catch::Approx(std::sqrt(2.0)));
  CHECK(c.q50 == Catch::Approx(1.0));
  // Linear-interpolation quantiles on two points: q -> 2q.
  CHECK(c.q025 == Catch::Approx(0.05));
  CHECK(c.q975 == Catch::Approx(1.95));
  CHECK(s.total_draws == 2);
  CHECK(s.chains == 1);
}

TEST_CASE("summarize annotates coefficients whose mean does not exist") {
  Draws d;
  d.samples.resize(300, 2);
  sepbayes::RngStream rng(12, 0);
  for (Eigen::Index i = 0; i < 300; ++i)
    for (Eigen::Index j = 0; j < 2; ++j) d.samples(i, j) = rng.normal();
  d.chain_ids.assign(300, 0);
  d.names = {"(Intercept)", "x1"};

  std::vector<ExistenceVerdict> existence(2);
  existence[0].verdict = Existence::Exists;
  existence[1].verdict = Existence::NotExists;

  const ChainSummary s = summarize(d, existence, 10);
  CHECK(s.coefficients[0].annotation.empty());
  CHECK(s.coefficients[1].annotation ==
        "posterior mean does not exist - reported average is not an "
        "estimator of a finite quantity");

  const auto j = sepbayes::to_json(s);
  CHECK(j["coefficients"][0]["existence"] == "exists");
  CHECK_FALSE(j["coefficients"][0].contains("annotation"));
  CHECK(j["coefficients"][1]["existence"] == "not-exists");
  const std::string note = j["coefficients"][1]["annotation"];
  CHECK(note.find("does not exist") != std::string::npos);
}

TEST_CASE("summarize rejects mismatched existence verdicts") {
  const Draws d = make_draws({{0.0, 1.0}, {2.0, 3.0}}, {"a", "b"});
  std::vector<ExistenceVerdict> existence(3);
  CHECK_THROWS_AS(summarize(d, existence, 0), std::invalid_argument);
}

TEST_CASE("mc standard error is never below sd over sqrt of draws") {
  // A strongly autocorrelated chain: ESS << S, so MC-SE >> sd/sqrt(S);
  // the cap at ESS <= S enforces the opposite inequality in general.
  Draws d;
  const Eigen::Index S = 5000;
  d.samples.resize(S, 1);
  d.samples.col(0) = ar1(S, 0.95, 13);
  d.chain_ids.assign(static_cast<std::size_t>(S), 0);
  d.names = {"x"};
  const ChainSummary s = summarize(d, {}, 0);
  const auto& c = s.coefficients.front();
  CHECK(c.mcse >= c.sd / std::sqrt(static_cast<double>(S)) - 1e-15);
  CHECK(c.ess_value <= static_cast<double>(S));
  CHECK(c.mcse > 3.0 * c.sd / std::sqrt(static_cast<double>(S)));
}

TEST_CASE("summarize averages acf over chains and splits per-chain means") {
  // Chain 0 sits near -1, chain 1 near +1: per-chain means must differ.
  Draws d;
  const Eigen::Index per = 500;
  d.samples.resize(2 * per, 1);
  sepbayes::RngStream rng(14, 0);
  for (Eigen::Index i = 0; i < per; ++i)
    d.samples(i, 0) = -1.0 + 0.1 * rng.normal();
  for (Eigen::Index i = per; i < 2 * per; ++i)
    d.samples(i, 0) = 1.0 + 0.1 * rng.normal();
  d.chain_ids.assign(static_cast<std::size_t>(2 * per), 0);
  for (Eigen::Index i = per; i < 2 * per; ++i)
    d.chain_ids[static_cast<std::size_t>(i)] = 1;
  d.names = {"x"};

  const ChainSummary s = summarize(d, {}, 5);
  REQUIRE(s.chains == 2);
  CHECK(s.per_chain_means[0][0] == Catch::Approx(-1.0).margin(0.05));
  CHECK(s.per_chain_means[1][0] == Catch::Approx(1.0).margin(0.05));
  // Pooled mean is near zero, but the ACF is computed within chains, so the
  // between-chain separation does not masquerade as autocorrelation.
  const auto& c = s.coefficients.front();
  CHECK(c.mean == Catch::Approx(0.0).margin(0.05));
  REQUIRE(c.acf.size() == 6);
  CHECK(c.acf[0] == Catch::Approx(1.0));
  for (int k = 1; k <= 5; ++k) CHECK(std::abs(c.acf[k]) < 0.2);
}

TEST_CASE("summarize names the coefficient when a diagnostic fails") {
  // Second column constant: ess/autocorrelation throw, and summarize must
  // identify the offending coefficient in its message.
  Draws d;
  d.samples.resize(100, 2);
  sepbayes::RngStream rng(15, 0);
  for (Eigen::Index i = 0; i < 100; ++i) {
    d.samples(i, 0) = rng.normal();
    d.samples(i, 1) = 7.0;
  }
  d.chain_ids.assign(100, 0);
  d.names = {"good", "stuck"};
  try {
    summarize(d, {}, 10);
    FAIL("expected invalid_argument");
  } catch (const std::invalid_argument& e) {
    const std::string msg = e.what();
    CHECK(msg.find("stuck") != std::string::npos);
    CHECK(msg.find("constant") != std::string::npos);
  }
}

TEST_CASE("summarize rejects empty draws") {
  Draws d;
  d.samples.resize(0, 1);
  d.names = {"x"};
  CHECK_THROWS_AS(summarize(d, {}, 0), std::invalid_argument);
}
