#include "minreact/simplex.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace minreact {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tableau {
  Eigen::MatrixXd t;             // m x (N + m)
  Eigen::VectorXd xb;            // basic values
  Eigen::VectorXd d;             // reduced costs
  std::vector<int> basis;
  std::vector<char> at_upper;    // nonbasic status
  std::vector<char> forbidden;   // never enters
  Eigen::VectorXd lo, up;
  int pivots = 0;

  double nonbasic_value(int j) const { return at_upper[j] ? up[j] : lo[j]; }

  void pivot(int r, int j) {
    const double piv = t(r, j);
    t.row(r) /= piv;
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      if (i != r && t(i, j) != 0.0) t.row(i) -= t(i, j) * t.row(r);
    d -= d[j] * t.row(r).transpose();
    t.col(j).setZero();
    t(r, j) = 1.0;
    d[j] = 0.0;
    ++pivots;
  }

  void reset_costs(const Eigen::VectorXd& cost) {
    d = cost;
    for (Eigen::Index i = 0; i < t.rows(); ++i)
      if (cost[basis[i]] != 0.0) d -= cost[basis[i]] * t.row(i).transpose();
    for (int b : basis) d[b] = 0.0;
  }

  // Returns Optimal, Unbounded or IterationLimit.
  LpStatus run(double tol, int max_pivots) {
    const Eigen::Index m = t.rows(), cols = t.cols();
    std::vector<char> is_basic(cols, 0);
    for (int b : basis) is_basic[b] = 1;
    while (true) {
      if (pivots > max_pivots) return LpStatus::IterationLimit;
      int j = -1;
      double dir = 0.0;
      for (Eigen::Index k = 0; k < cols; ++k) {
        if (is_basic[k] || forbidden[k] || lo[k] == up[k]) continue;
        if (!at_upper[k] && d[k] < -tol) { j = int(k); dir = 1.0; break; }
        if (at_upper[k] && d[k] > tol) { j = int(k); dir = -1.0; break; }
      }
      if (j < 0) return LpStatus::Optimal;

      double step = up[j] - lo[j];
      int leave = -1;
      bool leave_upper = false;
      for (Eigen::Index i = 0; i < m; ++i) {
        const double a = dir * t(i, j);
        const int bi = basis[i];
        double lim;
        bool to_upper;
        if (a > tol) {
          lim = (xb[i] - lo[bi]) / a;
          to_upper = false;
        } else if (a < -tol && std::isfinite(up[bi])) {
          lim = (up[bi] - xb[i]) / -a;
          to_upper = true;
        } else {
          continue;
        }
        lim = std::max(lim, 0.0);
        if (lim < step - tol || (leave >= 0 && lim <= step + tol && bi < basis[leave])) {
          step = lim;
          leave = int(i);
          leave_upper = to_upper;
        }
      }
      if (!std::isfinite(step)) return LpStatus::Unbounded;

      xb -= (dir * step) * t.col(j);
      if (leave < 0) {
        at_upper[j] = !at_upper[j];
        ++pivots;
        continue;
      }
      const double entering = nonbasic_value(j) + dir * step;
      const int out = basis[leave];
      at_upper[out] = leave_upper;
      is_basic[out] = 0;
      pivot(leave, j);
      basis[leave] = j;
      is_basic[j] = 1;
      xb[leave] = entering;
    }
  }
};

}  // namespace

LpSolution solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, double tol) {
  const Eigen::Index m = A.rows(), nvar = A.cols();
  if (b.size() != m || c.size() != nvar || lower.size() != nvar || upper.size() != nvar)
    throw std::invalid_argument("solve_lp: inconsistent dimensions");
  for (Eigen::Index k = 0; k < nvar; ++k)
    if (!std::isfinite(lower[k]) || lower[k] > upper[k]) {
      LpSolution bad;
      bad.status = LpStatus::Infeasible;
      return bad;
    }

  const Eigen::Index cols = nvar + m;
  Tableau tab;
  tab.lo = Eigen::VectorXd::Zero(cols);
  tab.up = Eigen::VectorXd::Constant(cols, kInf);
  tab.lo.head(nvar) = lower;
  tab.up.head(nvar) = upper;
  tab.at_upper.assign(cols, 0);
  tab.forbidden.assign(cols, 0);

  Eigen::VectorXd r = b - A * lower;
  tab.t = Eigen::MatrixXd::Zero(m, cols);
  tab.t.leftCols(nvar) = A;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (r[i] < 0.0) {
      tab.t.row(i) = -tab.t.row(i);
      r[i] = -r[i];
    }
    tab.t(i, nvar + i) = 1.0;
    tab.basis.push_back(int(nvar + i));
  }
  tab.xb = r;

  const int max_pivots = int(50 * cols * (m + 1) + 1000);
  LpSolution out;

  Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(cols);
  phase1.tail(m).setOnes();
  tab.reset_costs(phase1);
  LpStatus st = tab.run(tol, max_pivots);
  if (st == LpStatus::IterationLimit) {
    out.status = st;
    return out;
  }
  double infeas = 0.0;
  for (Eigen::Index i = 0; i < m; ++i)
    if (tab.basis[i] >= nvar) infeas += tab.xb[i];
  const double scale = std::max(1.0, b.size() ? b.cwiseAbs().maxCoeff() : 0.0);
  if (infeas > 1e-7 * scale) {
    out.status = LpStatus::Infeasible;
    out.pivots = tab.pivots;
    return out;
  }

  // Drive zero-valued artificials out of the basis where the row allows it.
  for (Eigen::Index i = 0; i < m; ++i) {
    if (tab.basis[i] < nvar) continue;
    std::vector<char> is_basic(cols, 0);
    for (int bb : tab.basis) is_basic[bb] = 1;
    for (Eigen::Index k = 0; k < nvar; ++k) {
      if (is_basic[k] || std::abs(tab.t(i, k)) <= 1e-7) continue;
      const int out_var = tab.basis[i];
      const double value = tab.nonbasic_value(int(k));
      tab.at_upper[out_var] = 0;
      tab.pivot(int(i), int(k));
      tab.basis[i] = int(k);
      tab.xb[i] = value;
      break;
    }
  }
  for (Eigen::Index k = nvar; k < cols; ++k) {
    tab.forbidden[k] = 1;
    tab.up[k] = 0.0;
  }

  Eigen::VectorXd phase2 = Eigen::VectorXd::Zero(cols);
  phase2.head(nvar) = c;
  tab.reset_costs(phase2);
  st = tab.run(tol, max_pivots);

  out.status = st;
  out.pivots = tab.pivots;
  out.x.resize(nvar);
  for (Eigen::Index k = 0; k < nvar; ++k) out.x[k] = tab.nonbasic_value(int(k));
  for (Eigen::Index i = 0; i < m; ++i)
    if (tab.basis[i] < nvar) out.x[tab.basis[i]] = tab.xb[i];
  for (Eigen::Index k = 0; k < nvar; ++k)
    out.x[k] = std::min(std::max(out.x[k], lower[k]), upper[k]);
  out.objective = c.dot(out.x);
  return out;
}

}  // namespace minreact
