#pragma once

// Small dense linear-programming engine: two-phase primal simplex with
// Bland's anti-cycling rule. Problems are stated as
//   maximize c^T x  subject to  A x (<=|>=|==) b,  lower <= x <= upper,
// with finite box bounds, so every instance is either Optimal or Infeasible.

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace sepbayes {

enum class LpStatus { Optimal, Infeasible, Unbounded };
enum class LpOp { LE, GE, EQ };

struct LpProblem {
  Eigen::VectorXd c;       // objective (maximized)
  Eigen::MatrixXd A;       // m x nv constraint matrix
  Eigen::VectorXd b;       // m right-hand sides
  std::vector<LpOp> ops;   // m comparison operators
  Eigen::VectorXd lower;   // nv finite lower bounds
  Eigen::VectorXd upper;   // nv finite upper bounds
};

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  double value = 0.0;
  Eigen::VectorXd x;
};

namespace detail {

class SimplexTableau {
 public:
  // rows: constraint rows in standard form (rhs >= 0), cols: all variables.
  Eigen::MatrixXd body;      // m x (ncols + 1), last column = rhs
  Eigen::RowVectorXd cost;   // 1 x (ncols + 1), reduced costs + negated obj
  std::vector<int> basis;    // basic variable per row
  int ncols = 0;

  void pivot(int row, int col) {
    body.row(row) /= body(row, col);
    for (Eigen::Index i = 0; i < body.rows(); ++i) {
      if (static_cast<int>(i) == row) continue;
      const double f = body(i, col);
      if (f != 0.0) body.row(i) -= f * body.row(row);
    }
    const double f = cost(col);
    if (f != 0.0) cost -= f * body.row(row);
    basis[static_cast<std::size_t>(row)] = col;
  }

  // Minimize the current cost row over columns where allowed[col] is true.
  // Returns false when unbounded (cannot happen with box bounds).
  bool minimize(const std::vector<bool>& allowed, double tol,
                long max_iters) {
    const int m = static_cast<int>(body.rows());
    for (long iter = 0; iter < max_iters; ++iter) {
      int entering = -1;
      for (int j = 0; j < ncols; ++j) {
        if (allowed[static_cast<std::size_t>(j)] && cost(j) < -tol) {
          entering = j;  // Bland: smallest eligible index
          break;
        }
      }
      if (entering < 0) return true;
      int leaving = -1;
      double best_ratio = 0.0;
      for (int i = 0; i < m; ++i) {
        const double a = body(i, entering);
        if (a > tol) {
          const double ratio = body(i, ncols) / a;
          if (leaving < 0 || ratio < best_ratio - tol ||
              (std::abs(ratio - best_ratio) <= tol &&
               basis[static_cast<std::size_t>(i)] <
                   basis[static_cast<std::size_t>(leaving)])) {
            leaving = i;
            best_ratio = ratio;
          }
        }
      }
      if (leaving < 0) return false;
      pivot(leaving, entering);
    }
    throw std::runtime_error("solve_lp: simplex iteration limit exceeded");
  }
};

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& prob, double tol = 1e-9) {
  const Eigen::Index nv = prob.c.size();
  const Eigen::Index m0 = prob.A.rows();
  if (prob.A.cols() != nv || prob.b.size() != m0 ||
      static_cast<Eigen::Index>(prob.ops.size()) != m0 ||
      prob.lower.size() != nv || prob.upper.size() != nv)
    throw std::invalid_argument("solve_lp: dimension mismatch");
  if (!prob.A.allFinite() || !prob.b.allFinite() || !prob.c.allFinite() ||
      !prob.lower.allFinite() || !prob.upper.allFinite())
    throw std::invalid_argument("solve_lp: non-finite coefficients");
  for (Eigen::Index j = 0; j < nv; ++j)
    if (prob.lower(j) > prob.upper(j))
      throw std::invalid_argument("solve_lp: lower bound exceeds upper bound");

  // Shift to s = x - lower >= 0 and add explicit rows s_j <= upper - lower.
  const Eigen::VectorXd shift = prob.lower;
  const Eigen::VectorXd width = prob.upper - prob.lower;
  const int m = static_cast<int>(m0 + nv);

  Eigen::MatrixXd rows(m, nv);
  Eigen::VectorXd rhs(m);
  std::vector<LpOp> ops(static_cast<std::size_t>(m));
  rows.topRows(m0) = prob.A;
  rhs.head(m0) = prob.b - prob.A * shift;
  for (Eigen::Index i = 0; i < m0; ++i)
    ops[static_cast<std::size_t>(i)] = prob.ops[static_cast<std::size_t>(i)];
  rows.bottomRows(nv).setZero();
  for (Eigen::Index j = 0; j < nv; ++j) {
    rows(m0 + j, j) = 1.0;
    rhs(m0 + j) = width(j);
    ops[static_cast<std::size_t>(m0 + j)] = LpOp::LE;
  }

  // Normalize right-hand sides to be nonnegative.
  for (int i = 0; i < m; ++i) {
    if (rhs(i) < 0.0) {
      rows.row(i) = -rows.row(i);
      rhs(i) = -rhs(i);
      auto& op = ops[static_cast<std::size_t>(i)];
      op = (op == LpOp::LE) ? LpOp::GE : (op == LpOp::GE ? LpOp::LE : LpOp::EQ);
    }
  }

  // Column layout: structural | one slack/surplus per inequality | artificials.
  std::vector<int> slack_col(static_cast<std::size_t>(m), -1);
  std::vector<int> artificial_col(static_cast<std::size_t>(m), -1);
  int ncols = static_cast<int>(nv);
  for (int i = 0; i < m; ++i)
    if (ops[static_cast<std::size_t>(i)] != LpOp::EQ)
      slack_col[static_cast<std::size_t>(i)] = ncols++;
  const int first_artificial = ncols;
  for (int i = 0; i < m; ++i)
    if (ops[static_cast<std::size_t>(i)] != LpOp::LE)
      artificial_col[static_cast<std::size_t>(i)] = ncols++;

  detail::SimplexTableau tab;
  tab.ncols = ncols;
  tab.body = Eigen::MatrixXd::Zero(m, ncols + 1);
  tab.body.leftCols(nv) = rows;
  tab.body.col(ncols) = rhs;
  tab.basis.assign(static_cast<std::size_t>(m), -1);
  for (int i = 0; i < m; ++i) {
    const auto si = static_cast<std::size_t>(i);
    if (slack_col[si] >= 0)
      tab.body(i, slack_col[si]) = (ops[si] == LpOp::LE) ? 1.0 : -1.0;
    if (artificial_col[si] >= 0) {
      tab.body(i, artificial_col[si]) = 1.0;
      tab.basis[si] = artificial_col[si];
    } else {
      tab.basis[si] = slack_col[si];
    }
  }

  const long max_iters = 10000L + 200L * static_cast<long>(m + ncols);
  std::vector<bool> allow_all(static_cast<std::size_t>(ncols), true);

  // Phase 1: minimize the sum of artificials.
  tab.cost = Eigen::RowVectorXd::Zero(ncols + 1);
  for (int j = first_artificial; j < ncols; ++j) tab.cost(j) = 1.0;
  for (int i = 0; i < m; ++i)
    if (tab.basis[static_cast<std::size_t>(i)] >= first_artificial)
      tab.cost -= tab.body.row(i);
  if (!tab.minimize(allow_all, tol, max_iters))
    return {LpStatus::Unbounded, 0.0, {}};
  if (-tab.cost(ncols) > tol) return {LpStatus::Infeasible, 0.0, {}};

  // Drive any remaining basic artificials out where possible; leftover rows
  // are redundant (all non-artificial entries ~ 0) and stay pinned at zero.
  for (int i = 0; i < m; ++i) {
    if (tab.basis[static_cast<std::size_t>(i)] < first_artificial) continue;
    for (int j = 0; j < first_artificial; ++j) {
      if (std::abs(tab.body(i, j)) > tol) {
        tab.pivot(i, j);
        break;
      }
    }
  }

  // Phase 2: minimize -c^T s with artificial columns barred from entering.
  std::vector<bool> allow(static_cast<std::size_t>(ncols), true);
  for (int j = first_artificial; j < ncols; ++j)
    allow[static_cast<std::size_t>(j)] = false;
  Eigen::RowVectorXd obj = Eigen::RowVectorXd::Zero(ncols + 1);
  obj.head(nv) = -prob.c.transpose();
  tab.cost = obj;
  for (int i = 0; i < m; ++i) {
    const int bi = tab.basis[static_cast<std::size_t>(i)];
    if (obj(bi) != 0.0) tab.cost -= obj(bi) * tab.body.row(i);
  }
  if (!tab.minimize(allow, tol, max_iters))
    return {LpStatus::Unbounded, 0.0, {}};

  Eigen::VectorXd s = Eigen::VectorXd::Zero(nv);
  for (int i = 0; i < m; ++i) {
    const int bi = tab.basis[static_cast<std::size_t>(i)];
    if (bi < static_cast<int>(nv)) s(bi) = tab.body(i, ncols);
  }
  LpSolution sol;
  sol.status = LpStatus::Optimal;
  sol.x = shift + s;
  // Clamp tiny simplex round-off back into the box.
  for (Eigen::Index j = 0; j < nv; ++j)
    sol.x(j) = std::min(prob.upper(j), std::max(prob.lower(j), sol.x(j)));
  sol.value = prob.c.dot(sol.x);
  return sol;
}

}  // namespace sepbayes
