#pragma once

// Seed-deterministic generators for the two separated benchmark scenarios:
//   solitary    — one continuous covariate whose sign separates the classes
//                 (the covariate column is itself a separating direction);
//   no-solitary — complete separation at the nonzero threshold x = -0.3 with
//                 both signs present inside class 1, so no single column
//                 separates on its own.
// Emitted covariates are already standardized (mean 0, sd 0.5), so running
// the standardization protocol downstream is a numerical no-op.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>

#include "sepbayes/dataset.hpp"
#include "sepbayes/rng.hpp"

namespace sepbayes {

enum class SimulateScenario { Solitary, NoSolitary };

inline SimulateScenario parse_scenario(const std::string& s) {
  if (s == "solitary") return SimulateScenario::Solitary;
  if (s == "no-solitary") return SimulateScenario::NoSolitary;
  throw std::invalid_argument("unknown scenario: " + s);
}

namespace detail {

// Center and rescale a column to mean 0, sd 0.5 (n-1 denominator).
inline void normalize_column(Eigen::VectorXd& v) {
  const double mean = v.mean();
  const double sd = std::sqrt((v.array() - mean).square().sum() /
                              static_cast<double>(v.size() - 1));
  v = (v.array() - mean) * (0.5 / sd);
}

}  // namespace detail

// The returned dataset has the response plus one covariate column named "x2"
// (no intercept column; callers add it). Deterministic in (scenario, n, seed).
inline Dataset simulate_dataset(SimulateScenario scenario, int n,
                                std::uint64_t seed) {
  if (n < 4) throw std::invalid_argument("simulate: need n >= 4");
  const int n0 = n / 2;        // class 0
  const int n1 = n - n0;       // class 1

  Dataset d;
  d.y.resize(n);
  for (int i = 0; i < n; ++i) d.y(i) = i < n0 ? 0 : 1;
  d.names = {"x2"};
  d.X.resize(n, 1);

  for (std::uint64_t attempt = 0;; ++attempt) {
    RngStream rng(seed, 0x53494d00ULL + attempt);
    Eigen::VectorXd v(n);
    if (scenario == SimulateScenario::Solitary) {
      // Class 0 strictly negative, class 1 strictly positive, well away
      // from zero so normalization cannot flip a sign.
      for (int i = 0; i < n0; ++i) v(i) = -(0.4 + 1.1 * rng.uniform());
      for (int i = n0; i < n; ++i) v(i) = 0.4 + 1.1 * rng.uniform();
    } else {
      // Class 0 in a shallow band below the -0.3 threshold; class 1 mixes a
      // few small negatives (still above the threshold) with moderate and
      // high positives chosen so the column lands near mean 0, sd 0.5.
      const int n_neg = std::max(1, n1 / 5);
      int n_hi = std::max(1, (n1 - n_neg + 2) / 3);
      if (n_neg + n_hi > n1) n_hi = n1 - n_neg;
      const int n_mid = n1 - n_neg - n_hi;
      for (int i = 0; i < n0; ++i) v(i) = -0.45 + 0.13 * rng.uniform();
      int k = n0;
      for (int i = 0; i < n_neg; ++i, ++k) v(k) = -0.28 + 0.22 * rng.uniform();
      for (int i = 0; i < n_hi; ++i, ++k) v(k) = 0.95 + 0.40 * rng.uniform();
      for (int i = 0; i < n_mid; ++i, ++k) v(k) = 0.10 + 0.30 * rng.uniform();
    }
    detail::normalize_column(v);

    bool ok = true;
    if (scenario == SimulateScenario::Solitary) {
      for (int i = 0; i < n; ++i)
        if ((d.y(i) == 0 && v(i) >= 0.0) || (d.y(i) == 1 && v(i) <= 0.0))
          ok = false;
    } else {
      bool neg_in_1 = false, pos_in_1 = false;
      for (int i = 0; i < n; ++i) {
        if (d.y(i) == 0 && v(i) >= -0.305) ok = false;
        if (d.y(i) == 1 && v(i) <= -0.295) ok = false;
        if (d.y(i) == 1 && v(i) < -0.03) neg_in_1 = true;
        if (d.y(i) == 1 && v(i) > 0.03) pos_in_1 = true;
      }
      ok = ok && neg_in_1 && pos_in_1;
    }
    if (ok) {
      d.X.col(0) = v;
      break;
    }
    if (attempt > 1000)
      throw std::runtime_error("simulate: could not realize the scenario");
  }
  d.standardized = true;
  validate_dataset(d);
  return d;
}

}  // namespace sepbayes
