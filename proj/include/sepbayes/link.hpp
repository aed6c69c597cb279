#pragma once

// Binary-regression link functions: success/failure probabilities and their
// logs, numerically stable for |t| up to about 700.

#include <cmath>
#include <stdexcept>
#include <utility>

#include "sepbayes/distributions.hpp"

namespace sepbayes {

enum class Link { Logit, Probit };

inline const char* link_name(Link link) {
  return link == Link::Logit ? "logit" : "probit";
}

inline Link parse_link(const std::string& s) {
  if (s == "logit") return Link::Logit;
  if (s == "probit") return Link::Probit;
  throw std::invalid_argument("unknown link: " + s);
}

// log f1(t) = log P(y=1 | t).
inline double log_f1(double t, Link link) {
  if (link == Link::Logit) {
    // -log(1 + e^{-t}), written to avoid overflow on either side.
    return t >= 0.0 ? -std::log1p(std::exp(-t)) : t - std::log1p(std::exp(t));
  }
  return detail::log_normal_cdf(t);
}

// log f0(t) = log P(y=0 | t) = log f1(-t) for both symmetric links.
inline double log_f0(double t, Link link) { return log_f1(-t, link); }

// (f1, f0) with both entries in (0,1).
inline std::pair<double, double> link_probabilities(double t, Link link) {
  const double lf1 = log_f1(t, link);
  const double lf0 = log_f0(t, link);
  double f1 = std::exp(lf1);
  double f0 = std::exp(lf0);
  constexpr double tiny = 5e-324;  // keep the open-interval contract
  if (f1 <= 0.0) f1 = tiny;
  if (f1 >= 1.0) f1 = 1.0 - 1e-16;
  if (f0 <= 0.0) f0 = tiny;
  if (f0 >= 1.0) f0 = 1.0 - 1e-16;
  return {f1, f0};
}

namespace detail {

// phi(t) / Phi(t), the inverse Mills ratio, stable for very negative t.
inline double normal_pdf_over_cdf(double t) {
  const double log_pdf = -0.5 * t * t - 0.5 * std::log(2.0 * kPi);
  return std::exp(log_pdf - log_normal_cdf(t));
}

// First and second derivatives of log f1(t) for the given link.
inline void log_f1_derivs(double t, Link link, double& d1, double& d2) {
  if (link == Link::Logit) {
    const double f1 = std::exp(log_f1(t, Link::Logit));
    d1 = 1.0 - f1;          // = f0
    d2 = -f1 * (1.0 - f1);  // = -f1 f0
    return;
  }
  const double r = normal_pdf_over_cdf(t);
  d1 = r;
  d2 = -r * (t + r);
}

// Derivatives of log f0(t) = log f1(-t): chain rule flips the first sign.
inline void log_f0_derivs(double t, Link link, double& d1, double& d2) {
  double a, b;
  log_f1_derivs(-t, link, a, b);
  d1 = -a;
  d2 = b;
}

}  // namespace detail

}  // namespace sepbayes
