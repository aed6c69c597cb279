#include <cmath>
#include <stdexcept>
#include <vector>

#include <catch2/catch_amalgamated.hpp>

#include <sepbayes/dataset.hpp>
#include <sepbayes/predict.hpp>
#include <sepbayes/priors.hpp>
#include <sepbayes/samplers.hpp>

#include "support/oracles.hpp"

using sepbayes::brier;
using sepbayes::Dataset;
using sepbayes::Draws;
using sepbayes::IndependentNormal;
using sepbayes::IndependentT;
using sepbayes::Link;
using sepbayes::map_estimate;
using sepbayes::MapResult;
using sepbayes::misclassification;
using sepbayes::predict_mc;
using sepbayes::predict_point;
using sepbayes::PriorSpec;

namespace {

Draws make_draws(const std::vector<std::vector<double>>& rows) {
  Draws d;
  const Eigen::Index S = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = static_cast<Eigen::Index>(rows.front().size());
  d.samples.resize(S, p);
  for (Eigen::Index i = 0; i < S; ++i)
    for (Eigen::Index j = 0; j < p; ++j)
      d.samples(i, j) = rows[static_cast<std::size_t>(i)]
                            [static_cast<std::size_t>(j)];
  d.chain_ids.assign(static_cast<std::size_t>(S), 0);
  for (Eigen::Index j = 0; j < p; ++j)
    d.names.push_back("b" + std::to_string(j));
  return d;
}

double logistic(double t) { return 1.0 / (1.0 + std::exp(-t)); }

Dataset overlap20() {
  const std::vector<double> x = {-1.9, -1.6, -1.3, -1.1, -0.9, -0.7, -0.5,
                                 -0.3, -0.1, 0.0,  0.1,  0.3,  0.5,  0.7,
                                 0.9,  1.1,  1.3,  1.6,  1.9,  2.0};
  const std::vector<int> y = {0, 0, 1, 0, 0, 1, 0, 1, 0, 1,
                              0, 1, 1, 0, 1, 1, 0, 1, 1, 1};
  Dataset d;
  d.X.resize(20, 2);
  d.y.resize(20);
  for (int i = 0; i < 20; ++i) {
    d.X(i, 0) = 1.0;
    d.X(i, 1) = x[static_cast<std::size_t>(i)];
    d.y(i) = y[static_cast<std::size_t>(i)];
  }
  d.names = {"(Intercept)", "x"};
  d.intercept_index = 0;
  return d;
}

}  // namespace

TEST_CASE("a single zero draw predicts one half everywhere") {
  const Draws d = make_draws({{0.0, 0.0}});
  Eigen::MatrixXd X(3, 2);
  X << 1.0, -2.0, 1.0, 0.0, 1.0, 5.5;
  for (const Link link : {Link::Logit, Link::Probit}) {
    const Eigen::VectorXd probs = predict_mc(d, X, link);
    REQUIRE(probs.size() == 3);
    for (Eigen::Index i = 0; i < 3; ++i)
      CHECK(probs(i) == Catch::Approx(0.5).margin(1e-14));
  }
}

TEST_CASE("mirrored draws average to one half under symmetric links") {
  const Draws d = make_draws({{1.7, -0.6}, {-1.7, 0.6}});
  Eigen::MatrixXd X(2, 2);
  X << 1.0, 2.0, -3.0, 0.4;
  for (const Link link : {Link::Logit, Link::Probit}) {
    const Eigen::VectorXd probs = predict_mc(d, X, link);
    for (Eigen::Index i = 0; i < probs.size(); ++i)
      CHECK(probs(i) == Catch::Approx(0.5).margin(1e-12));
  }
}

TEST_CASE("monte-carlo probabilities match a hand average") {
  const Draws d = make_draws({{0.5}, {1.0}, {-0.25}});
  Eigen::MatrixXd X(2, 1);
  X << 1.0, 2.0;
  const Eigen::VectorXd probs = predict_mc(d, X, Link::Logit);
  const double p1 =
      (logistic(0.5) + logistic(1.0) + logistic(-0.25)) / 3.0;
  const double p2 =
      (logistic(1.0) + logistic(2.0) + logistic(-0.5)) / 3.0;
  CHECK(probs(0) == Catch::Approx(p1).epsilon(1e-12));
  CHECK(probs(1) == Catch::Approx(p2).epsilon(1e-12));
}

TEST_CASE("monte-carlo probabilities are invariant to draw order") {
  const Draws forward = make_draws({{0.3}, {-1.2}, {2.0}, {0.0}});
  const Draws shuffled = make_draws({{2.0}, {0.0}, {0.3}, {-1.2}});
  Eigen::MatrixXd X(3, 1);
  X << -1.0, 0.5, 4.0;
  const Eigen::VectorXd a = predict_mc(forward, X, Link::Probit);
  const Eigen::VectorXd b = predict_mc(shuffled, X, Link::Probit);
  CHECK((a - b).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("predict_mc validates its inputs") {
  const Draws d = make_draws({{0.0, 0.0}});
  CHECK_THROWS_AS(predict_mc(d, Eigen::MatrixXd::Zero(2, 3), Link::Logit),
                  std::invalid_argument);
  Draws empty;
  empty.samples.resize(0, 2);
  CHECK_THROWS_AS(predict_mc(empty, Eigen::MatrixXd::Zero(2, 2), Link::Logit),
                  std::invalid_argument);
}

TEST_CASE("point predictions use the plug-in coefficient") {
  Eigen::VectorXd beta(2);
  beta << 0.5, -1.0;
  Eigen::MatrixXd X(2, 2);
  X << 1.0, 1.0, 1.0, -2.0;
  const Eigen::VectorXd probs = predict_point(beta, X, Link::Logit);
  CHECK(probs(0) == Catch::Approx(logistic(-0.5)).epsilon(1e-12));
  CHECK(probs(1) == Catch::Approx(logistic(2.5)).epsilon(1e-12));
  CHECK_THROWS_AS(predict_point(beta, Eigen::MatrixXd::Zero(2, 3),
                                Link::Logit),
                  std::invalid_argument);
}

TEST_CASE("misclassification counts threshold errors") {
  Eigen::VectorXd probs(4);
  probs << 0.9, 0.2, 0.8, 0.1;
  Eigen::VectorXi y(4);
  y << 1, 0, 1, 0;
  CHECK(misclassification(probs, y) == 0.0);

  y << 0, 1, 0, 1;
  CHECK(misclassification(probs, y) == 1.0);

  y << 1, 0, 0, 1;
  CHECK(misclassification(probs, y) == 0.5);
}

TEST_CASE("ties at the threshold classify as success") {
  const Eigen::VectorXd probs = Eigen::VectorXd::Constant(4, 0.5);
  Eigen::VectorXi zeros = Eigen::VectorXi::Zero(4);
  Eigen::VectorXi ones = Eigen::VectorXi::Ones(4);
  CHECK(misclassification(probs, zeros) == 1.0);
  CHECK(misclassification(probs, ones) == 0.0);
}

TEST_CASE("misclassification honors a custom threshold") {
  Eigen::VectorXd probs(2);
  probs << 0.4, 0.25;
  Eigen::VectorXi y(2);
  y << 1, 0;
  CHECK(misclassification(probs, y, 0.5) == 0.5);   // 0.4 -> label 0, wrong
  CHECK(misclassification(probs, y, 0.3) == 0.0);   // 0.4 -> label 1
  CHECK(misclassification(probs, y, 0.2) == 0.5);   // 0.25 -> label 1, wrong
}

TEST_CASE("misclassification validates lengths") {
  CHECK_THROWS_AS(
      misclassification(Eigen::VectorXd::Zero(3), Eigen::VectorXi::Zero(2)),
      std::invalid_argument);
  CHECK_THROWS_AS(
      misclassification(Eigen::VectorXd(), Eigen::VectorXi()),
      std::invalid_argument);
}

TEST_CASE("brier score basics") {
  Eigen::VectorXd probs(2);
  Eigen::VectorXi y(2);
  probs << 1.0, 0.0;
  y << 1, 0;
  CHECK(brier(probs, y) == 0.0);

  probs << 0.5, 0.5;
  CHECK(brier(probs, y) == Catch::Approx(0.25));

  probs << 0.8, 0.3;
  y << 1, 1;
  CHECK(brier(probs, y) == Catch::Approx((0.04 + 0.49) / 2.0));
}

TEST_CASE("brier score is symmetric under label and probability flips") {
  Eigen::VectorXd probs(3);
  probs << 0.8, 0.3, 0.55;
  Eigen::VectorXi y(3);
  y << 1, 0, 1;
  const Eigen::VectorXd flipped = (1.0 - probs.array()).matrix();
  Eigen::VectorXi y_flipped = (1 - y.array()).matrix();
  CHECK(brier(probs, y) == Catch::Approx(brier(flipped, y_flipped)));
}

TEST_CASE("brier rejects probabilities outside the unit interval") {
  Eigen::VectorXd probs(1);
  Eigen::VectorXi y(1);
  y << 1;
  probs << 1.2;
  CHECK_THROWS_AS(brier(probs, y), std::invalid_argument);
  probs << -0.1;
  CHECK_THROWS_AS(brier(probs, y), std::invalid_argument);
}

TEST_CASE("posterior mode under a flat normal prior matches the mle") {
  const Dataset d = overlap20();
  IndependentNormal prior;
  prior.locations = Eigen::VectorXd::Zero(2);
  prior.scales = Eigen::VectorXd::Constant(2, 1e6);

  const MapResult map =
      map_estimate(d, PriorSpec(prior), Link::Logit, 1e-10);
  REQUIRE(map.converged);
  CHECK(map.grad_norm < 1e-10);

  const Eigen::VectorXd mle = oracle::irls_logistic(d.X, d.y);
  INFO("map " << map.beta.transpose() << " mle " << mle.transpose());
  CHECK((map.beta - mle).cwiseAbs().maxCoeff() < 1e-4);
}

TEST_CASE("posterior mode of a label-symmetric problem is zero") {
  // Every x appears with both labels, so flipping all labels leaves the data
  // unchanged; with a symmetric link and prior the posterior is symmetric in
  // beta -> -beta and the unique mode is 0.
  Dataset d;
  d.X.resize(4, 1);
  d.X << 1.0, 1.0, 2.0, 2.0;
  d.y.resize(4);
  d.y << 1, 0, 1, 0;
  d.names = {"x"};

  IndependentNormal prior;
  prior.locations = Eigen::VectorXd::Zero(1);
  prior.scales = Eigen::VectorXd::Constant(1, 2.5);

  const MapResult map = map_estimate(d, PriorSpec(prior), Link::Logit);
  REQUIRE(map.converged);
  CHECK(std::abs(map.beta(0)) < 1e-6);
}

TEST_CASE("cauchy prior keeps the mode finite under complete separation") {
  Dataset d;
  d.X.resize(5, 1);
  d.X << 1.0, 2.0, 3.0, -1.0, -2.0;
  d.y.resize(5);
  d.y << 1, 1, 1, 0, 0;
  d.names = {"x"};

  IndependentT prior;
  prior.df = 1.0;
  prior.locations = Eigen::VectorXd::Zero(1);
  prior.scales = Eigen::VectorXd::Constant(1, 2.5);

  const MapResult map = map_estimate(d, PriorSpec(prior), Link::Logit);
  REQUIRE(map.converged);
  CHECK(map.grad_norm < 1e-8);
  CHECK(map.beta(0) > 0.0);
  CHECK(map.beta(0) < 20.0);
}

TEST_CASE("reported gradient norm matches a fresh evaluation at the mode") {
  const Dataset d = overlap20();
  IndependentT prior;
  prior.df = 7.0;
  prior.locations = Eigen::VectorXd::Zero(2);
  prior.scales = (Eigen::VectorXd(2) << 10.0, 2.5).finished();
  const PriorSpec spec(prior);

  const MapResult map = map_estimate(d, spec, Link::Probit);
  REQUIRE(map.converged);

  Eigen::VectorXd grad(2);
  Eigen::MatrixXd hess(2, 2);
  sepbayes::detail::log_posterior_derivs(map.beta, d, spec, Link::Probit,
                                         grad, hess);
  CHECK(grad.cwiseAbs().maxCoeff() == Catch::Approx(map.grad_norm));
  CHECK(map.grad_norm < 1e-8);
}
