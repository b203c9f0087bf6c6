#pragma once

#include "minreact/graph.hpp"
#include "minreact/qp.hpp"

#include <Eigen/Core>

#include <string>
#include <variant>
#include <vector>

namespace minreact {

/// Weight-perturbation problem over p = vec(P) (column-major, p[i + n*j] = P(i, j)):
///     minimize p^T p  subject to  K_eq p = b_eq,  H p <= h
/// with K_eq = [K1; K2; K3], K1 = 1^T (x) I summing rows of P, K2 = I (x) 1^T summing
/// columns, K3 pinning P(i, j) = 0 wherever L(i, j) = 0, and b_eq = [0; l; 0] with
/// l_j = -sum_i L(i, j). H p <= h keeps every nonzero entry of L + P at least epsilon away
/// from zero on the side of its original sign.
struct QpProblem {
  int n = 0;
  int dim = 0;
  double epsilon = 0.0;
  Eigen::MatrixXd K_eq;
  Eigen::VectorXd b_eq;
  Eigen::MatrixXd H_ineq;
  Eigen::VectorXd h_ineq;
  std::vector<int> zero_entries;  // vec indices pinned by K3, in K3 row order
};

struct WeightPerturbation {
  Eigen::MatrixXd P;
  Eigen::MatrixXd L_star;  // L + P
  double objective = 0.0;  // sum of P(i, j)^2
  double kkt_residual = 0.0;
};

struct Infeasible {
  std::string reason;
};

using WeightBalanceResult = std::variant<WeightPerturbation, Infeasible>;

inline constexpr const char* kNotStronglyConnected = "not strongly connected";
inline constexpr const char* kEpsilonTooLarge = "epsilon too large";

/// 1e-3 times the smallest positive off-diagonal entry of L (1e-3 if there is none).
double auto_epsilon(const Eigen::MatrixXd& L);

QpProblem build_qp(const Eigen::MatrixXd& L, double epsilon);

/// Runs the QP solver on an assembled problem, no connectivity pre-check.
QpSolution solve_qp_problem(const QpProblem& problem, const QpSettings& settings = {});

/// Minimum-norm perturbation making L minimally reactive without changing its sparsity
/// or signs. Strong connectivity is tested first; if the graph is strongly connected
/// and the solver still fails, epsilon is blamed when epsilon/10 succeeds.
WeightBalanceResult solve_weight_perturbation(const Eigen::MatrixXd& L, double epsilon);
inline WeightBalanceResult solve_weight_perturbation(const Eigen::MatrixXd& L) {
  return solve_weight_perturbation(L, auto_epsilon(L));
}

/// Feasible (generally suboptimal) perturbation: every arc s -> t with weight w gets a
/// return path t ~> s (fewest hops, ties to the smallest node index) and w is added along
/// that path, so the flow becomes a sum of |E| cycles. Throws GraphError if the graph of L
/// is not strongly connected.
WeightPerturbation construct_feasible_by_cycles(const Eigen::MatrixXd& L);

struct FlowCycle {
  std::vector<int> nodes;  // v0 -> v1 -> ... -> v0 (closing arc implicit)
  double flow = 0.0;
};

struct FlowDecomposition {
  bool success = false;
  std::vector<FlowCycle> cycles;
  double residual = 0.0;  // largest arc flow left over
};

/// Greedy cycle peeling of the arc flow x(s -> t) = L_star(t, s).
FlowDecomposition decompose_flow(const Eigen::MatrixXd& L_star, double tol = 1e-9);
bool verify_flow_decomposition(const Eigen::MatrixXd& L_star, double tol = 1e-9);

/// Shortest return path from `from` to `to` following arc direction, or empty if none.
std::vector<int> shortest_path(const DirectedGraph& g, int from, int to);

}  // namespace minreact
