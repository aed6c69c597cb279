#pragma once

// Separation diagnostics for binary-response designs: detect complete or
// quasicomplete separation via linear programs over the signed design, flag
// solitary separators by exact sign scans, and derive per-coefficient
// posterior-mean existence verdicts for the supported priors and links.

#include <Eigen/Dense>
#include <json.hpp>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "sepbayes/dataset.hpp"
#include "sepbayes/link.hpp"
#include "sepbayes/lp.hpp"
#include "sepbayes/priors.hpp"

namespace sepbayes {

// Signed design Z with row z_i = x_i when y_i = 1 and -x_i when y_i = 0.
// Separation of the dataset <=> exists alpha with Z alpha >= 0, Z alpha != 0.
inline Eigen::MatrixXd signed_design(const Dataset& d) {
  validate_dataset(d);
  Eigen::MatrixXd Z = d.X;
  for (Eigen::Index i = 0; i < d.n(); ++i)
    if (d.y(i) == 0) Z.row(i) = -Z.row(i);
  return Z;
}

enum class SeparationKind { None, Quasicomplete, Complete };

inline const char* separation_kind_name(SeparationKind k) {
  switch (k) {
    case SeparationKind::None: return "none";
    case SeparationKind::Quasicomplete: return "quasicomplete";
    default: return "complete";
  }
}

struct SeparationCertificate {
  Eigen::VectorXd alpha;
  SeparationKind kind = SeparationKind::None;
};

struct SeparationResult {
  SeparationKind kind = SeparationKind::None;
  std::optional<SeparationCertificate> certificate;
};

// Box bound for the completeness probe: {Z a >= 1, -box <= a <= box} is
// feasible iff the unit-box margin maximum reaches 1/box (certificates are
// scale-free), which is how the probe is solved internally.
inline constexpr double kSeparationBox = 1e6;

// Decide None / Quasicomplete / Complete with a certificate direction.
//
// Completeness probe (LP-A): feasibility of {Z a >= 1, |a|_inf <= 1e6},
// solved in the scale-equivalent margin form  max m : Z a >= m 1, a in
// [-1,1]^p, m in [0,1]  (feasible iff m* >= 1e-6; witness a/m*). Otherwise
// LP-B: max 1^T Z a subject to Z a >= 0, a in [-1,1]^p; an optimum above
// n * tol certifies quasicomplete separation, else there is none.
inline SeparationResult detect_separation(const Dataset& d, double tol = 1e-9) {
  validate_dataset(d);
  const Eigen::MatrixXd Z = signed_design(d);
  const Eigen::Index n = d.n();
  const Eigen::Index p = d.p();

  // LP-A in margin form: variables (a_1..a_p, m).
  {
    LpProblem lp;
    lp.c = Eigen::VectorXd::Zero(p + 1);
    lp.c(p) = 1.0;
    lp.A = Eigen::MatrixXd::Zero(n, p + 1);
    lp.A.leftCols(p) = Z;
    lp.A.col(p).setConstant(-1.0);
    lp.b = Eigen::VectorXd::Zero(n);
    lp.ops.assign(static_cast<std::size_t>(n), LpOp::GE);
    lp.lower = Eigen::VectorXd::Constant(p + 1, -1.0);
    lp.lower(p) = 0.0;
    lp.upper = Eigen::VectorXd::Constant(p + 1, 1.0);
    const LpSolution sol = solve_lp(lp, tol);
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error(
          "detect_separation: completeness LP failed to solve");
    const double margin = sol.value;
    if (margin >= 1.0 / kSeparationBox) {
      SeparationCertificate cert;
      cert.kind = SeparationKind::Complete;
      cert.alpha = sol.x.head(p) / margin;  // satisfies Z alpha >= 1
      return {SeparationKind::Complete, cert};
    }
  }

  // LP-B: any separating direction at all?
  {
    LpProblem lp;
    lp.c = Z.colwise().sum().transpose();
    lp.A = Z;
    lp.b = Eigen::VectorXd::Zero(n);
    lp.ops.assign(static_cast<std::size_t>(n), LpOp::GE);
    lp.lower = Eigen::VectorXd::Constant(p, -1.0);
    lp.upper = Eigen::VectorXd::Constant(p, 1.0);
    const LpSolution sol = solve_lp(lp, tol);
    if (sol.status != LpStatus::Optimal)
      throw std::runtime_error(
          "detect_separation: separation LP failed to solve");
    if (sol.value > static_cast<double>(n) * tol) {
      SeparationCertificate cert;
      cert.kind = SeparationKind::Quasicomplete;
      cert.alpha = sol.x;
      return {SeparationKind::Quasicomplete, cert};
    }
  }
  return {SeparationKind::None, std::nullopt};
}

enum class SolitaryDirection { Plus, Minus };

struct SolitaryStatus {
  bool solitary = false;
  SolitaryDirection direction = SolitaryDirection::Plus;
  SeparationKind strictness = SeparationKind::Complete;
  bool all_zero_warning = false;  // degenerate all-zero column
};

// Exact per-column sign scans (no epsilon): column j is Solitary(+) when
// x_ij >= 0 on the successes and <= 0 on the failures — i.e. the coordinate
// direction e_j itself separates; all inequalities strict means complete,
// any exact zero means quasicomplete. Solitary(-) is the mirrored pattern.
inline std::vector<SolitaryStatus> find_solitary_separators(const Dataset& d) {
  validate_dataset(d);
  std::vector<SolitaryStatus> out(static_cast<std::size_t>(d.p()));
  for (Eigen::Index j = 0; j < d.p(); ++j) {
    bool plus_ok = true, minus_ok = true, any_zero = false, all_zero = true;
    for (Eigen::Index i = 0; i < d.n(); ++i) {
      const double v = d.X(i, j);
      const double signed_v = d.y(i) == 1 ? v : -v;
      if (signed_v < 0.0) plus_ok = false;
      if (signed_v > 0.0) minus_ok = false;
      if (v == 0.0) any_zero = true;
      if (v != 0.0) all_zero = false;
    }
    auto& st = out[static_cast<std::size_t>(j)];
    if (plus_ok || minus_ok) {
      st.solitary = true;
      st.direction = plus_ok ? SolitaryDirection::Plus : SolitaryDirection::Minus;
      st.strictness =
          any_zero ? SeparationKind::Quasicomplete : SeparationKind::Complete;
      st.all_zero_warning = all_zero;
    }
  }
  return out;
}

enum class Existence { Exists, NotExists, Unknown };

inline const char* existence_name(Existence e) {
  switch (e) {
    case Existence::Exists: return "exists";
    case Existence::NotExists: return "not-exists";
    default: return "unknown";
  }
}

struct ExistenceVerdict {
  Existence verdict = Existence::Unknown;
  std::string basis;
};

struct SeparationReport {
  SeparationKind kind = SeparationKind::None;
  std::optional<SeparationCertificate> certificate;
  std::vector<SolitaryStatus> solitary;
  std::vector<ExistenceVerdict> existence;
  std::vector<std::string> names;
};

// Per-coefficient posterior-mean existence verdicts.
//
// Independent t with df <= 1 (Cauchy at df = 1), logit or probit, any
// locations: the mean of beta_j exists iff column j is not a solitary
// separator. Independent t with df > 1 and independent normal priors have a
// finite prior first moment and a bounded likelihood, so every mean exists.
// Multivariate t with df = 1 (multivariate Cauchy): all exist when there is
// no separation, none exist under complete separation, and the quasicomplete
// case is undecided (reported Unknown). Multivariate t with df > 1: all exist.
inline SeparationReport existence_report(const Dataset& d,
                                         const PriorSpec& prior, Link link,
                                         double tol = 1e-9) {
  validate_dataset(d);
  validate_prior(prior, d.p());
  (void)link;  // both supported links use the same verdict logic

  SeparationReport report;
  report.names = d.names;
  const SeparationResult det = detect_separation(d, tol);
  report.kind = det.kind;
  report.certificate = det.certificate;
  report.solitary = find_solitary_separators(d);
  report.existence.assign(static_cast<std::size_t>(d.p()), {});

  const auto set_all = [&report](Existence v, const std::string& basis) {
    for (auto& e : report.existence) {
      e.verdict = v;
      e.basis = basis;
    }
  };

  if (std::holds_alternative<IndependentNormal>(prior)) {
    set_all(Existence::Exists,
            "normal prior: bounded likelihood and finite prior moments");
  } else if (const auto* it = std::get_if<IndependentT>(&prior)) {
    if (it->df > 1.0) {
      set_all(Existence::Exists,
              "independent t prior with df > 1: bounded likelihood and "
              "finite prior moments");
    } else {
      for (Eigen::Index j = 0; j < d.p(); ++j) {
        auto& e = report.existence[static_cast<std::size_t>(j)];
        if (report.solitary[static_cast<std::size_t>(j)].solitary) {
          e.verdict = Existence::NotExists;
          e.basis =
              it->df == 1.0
                  ? "independent Cauchy prior: solitary separator column"
                  : "independent t prior with df < 1: solitary separator "
                    "column (tails at least as heavy as Cauchy)";
        } else if (it->df == 1.0) {
          e.verdict = Existence::Exists;
          e.basis =
              "independent Cauchy prior: column is not a solitary separator";
        } else {
          e.verdict = Existence::Unknown;
          e.basis =
              "independent t prior with df < 1: no sufficiency result for "
              "non-solitary columns";
        }
      }
    }
  } else {
    const auto& mt = std::get<MultivariateT>(prior);
    if (mt.df > 1.0) {
      set_all(Existence::Exists,
              "multivariate t prior with df > 1: bounded likelihood and "
              "finite prior moments");
    } else if (report.kind == SeparationKind::None) {
      set_all(Existence::Exists,
              "multivariate Cauchy-type prior with no separation: likelihood "
              "decays exponentially in every direction");
    } else if (report.kind == SeparationKind::Complete) {
      set_all(Existence::NotExists,
              "multivariate Cauchy-type prior under complete separation: "
              "prior mass along the separating cone is not integrable "
              "against the likelihood");
    } else {
      set_all(Existence::Unknown,
              "multivariate Cauchy-type prior under quasicomplete "
              "separation: undecided case");
    }
  }
  return report;
}

inline nlohmann::ordered_json to_json(const SeparationReport& report) {
  nlohmann::ordered_json j;
  j["kind"] = separation_kind_name(report.kind);
  if (report.certificate) {
    j["alpha"] = std::vector<double>(
        report.certificate->alpha.data(),
        report.certificate->alpha.data() + report.certificate->alpha.size());
  } else {
    j["alpha"] = nullptr;
  }
  j["solitary"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < report.solitary.size(); ++k) {
    const auto& st = report.solitary[k];
    nlohmann::ordered_json s;
    s["column"] = k;
    s["name"] = k < report.names.size() ? report.names[k] : "";
    if (!st.solitary) {
      s["status"] = "none";
    } else {
      s["status"] = st.direction == SolitaryDirection::Plus ? "plus" : "minus";
      s["strictness"] = separation_kind_name(st.strictness);
      if (st.all_zero_warning)
        s["warning"] = "column is identically zero (degenerate separator)";
    }
    j["solitary"].push_back(s);
  }
  j["existence"] = nlohmann::ordered_json::array();
  for (std::size_t k = 0; k < report.existence.size(); ++k) {
    nlohmann::ordered_json e;
    e["coef"] = k < report.names.size() ? report.names[k] : "";
    e["verdict"] = existence_name(report.existence[k].verdict);
    e["basis"] = report.existence[k].basis;
    j["existence"].push_back(e);
  }
  return j;
}

}  // namespace sepbayes
