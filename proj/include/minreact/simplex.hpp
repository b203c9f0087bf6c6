#pragma once

#include <Eigen/Core>

namespace minreact {

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  Eigen::VectorXd x;
  double objective = 0.0;
  int pivots = 0;
};

/// minimize c^T x  subject to  A x = b,  lower <= x <= upper (upper may be +inf).
/// Dense two-phase primal simplex with bounded variables and Bland's rule, so degenerate
/// problems terminate. Redundant equality rows are tolerated. Returns a basic (vertex)
/// solution.
LpSolution solve_lp(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, const Eigen::VectorXd& c,
                    const Eigen::VectorXd& lower, const Eigen::VectorXd& upper, double tol = 1e-9);

}  // namespace minreact
