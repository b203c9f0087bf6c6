#pragma once

#include <Eigen/Core>

#include <string>

namespace minreact {

enum class QpStatus { Optimal, Infeasible, IterationLimit };

std::string to_string(QpStatus s);

struct QpSolution {
  QpStatus status = QpStatus::Infeasible;
  Eigen::VectorXd x;
  Eigen::VectorXd eq_multipliers;    // one per equality row (0 for rows dropped as redundant)
  Eigen::VectorXd ineq_multipliers;  // >= 0, one per inequality row
  double objective = 0.0;
  int iterations = 0;
  double kkt_residual = 0.0;         // ||G x + c + Aeq^T y + Ain^T z||_inf
  double max_violation = 0.0;        // largest equality or inequality violation
};

struct QpSettings {
  double feasibility_tol = 1e-10;  // relative to the row norm
  double dependence_tol = 1e-10;   // relative residual below which a constraint is treated as dependent
  int max_iterations = 0;          // 0: 20 * (variables + constraints)
};

/// Strictly convex QP
///     minimize   1/2 x^T G x + c^T x
///     subject to Aeq x = beq,  Ain x <= bin
/// by the dual active-set method of Goldfarb and Idnani: start from the unconstrained
/// minimizer and add violated constraints one at a time while keeping dual feasibility.
/// Linearly dependent but consistent equality rows are skipped. G must be positive definite.
/// Infeasibility is reported when a violated constraint cannot be reached by any primal or
/// dual step.
QpSolution solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, const Eigen::MatrixXd& Aeq,
                    const Eigen::VectorXd& beq, const Eigen::MatrixXd& Ain, const Eigen::VectorXd& bin,
                    const QpSettings& settings = {});

}  // namespace minreact
