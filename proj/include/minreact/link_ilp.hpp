#pragma once

#include "minreact/graph.hpp"

#include <Eigen/Core>

#include <vector>

namespace minreact {

enum class LinkMode { Add, Remove, AddRemove, AddRemoveBiased };

/// One binary decision: add the absent arc source -> target, or remove the present one.
struct LinkVariable {
  int source = 0;
  int target = 0;
  bool add = true;
};

/// Balance program over binary link variables:
///     minimize w^T x  subject to  balance_rows x = rhs,  x in {0, 1}
/// Row i reads sum_j P(i,j) - sum_j P(j,i) - sum_j Q(i,j) + sum_j Q(j,i) = outdeg_i - indeg_i.
/// Variables are ordered as vec(P) then vec(Q), i.e. by (source, target) within each block.
struct IlpProblem {
  LinkMode mode = LinkMode::AddRemove;
  int n = 0;
  std::vector<LinkVariable> variables;
  Eigen::MatrixXd balance_rows;
  Eigen::VectorXd rhs;
  Eigen::VectorXd objective_weights;  // all ones, or 1 - eps (add) / 1 + eps (remove)
};

struct IlpSolution {
  Eigen::VectorXd x;             // 0/1, lexicographically smallest among optimal solutions
  double objective = 0.0;        // weighted objective at x
  Eigen::VectorXd relaxation;    // first LP relaxation vertex
  bool relaxation_integral = false;
  int lp_solves = 0;
  int branch_nodes = 0;
};

struct LinkPerturbation {
  std::vector<Arc> added;
  std::vector<Arc> removed;
  int J_star = 0;  // |added| + |removed|
  DirectedGraph A_star;
  bool relaxation_integral = true;
};

/// 0.5 / n^2
double default_bias(int n);

/// Throws GraphError for weighted input and std::invalid_argument for a bias outside (0, 1/n^2).
IlpProblem build_link_ilp(const DirectedGraph& g, LinkMode mode, double bias_epsilon = 0.0);

/// LP relaxation (the balance matrix is an arc incidence matrix, so vertices are integral),
/// branch and bound if a vertex is fractional anyway, then a fixing pass that returns the
/// lexicographically smallest optimal vector.
IlpSolution solve_link_ilp(const IlpProblem& problem);

LinkPerturbation solve_link_addition(const DirectedGraph& g);
LinkPerturbation solve_link_removal(const DirectedGraph& g);
/// bias_epsilon = 0 solves the plain count; 0 < bias_epsilon < 1/n^2 prefers additions among
/// minimum-count solutions.
LinkPerturbation solve_link_addrem(const DirectedGraph& g, double bias_epsilon = 0.0);

enum class TrivialMode { Add, Remove };
/// Add the reverse of every unidirectional arc, or delete every unidirectional arc.
LinkPerturbation trivial_symmetrize(const DirectedGraph& g, TrivialMode mode);

/// Number of arcs whose reverse is absent.
int count_unidirectional(const DirectedGraph& g);

/// psi = J* / n with J* the unbiased add/remove optimum.
double structural_reactivity(const DirectedGraph& g);

/// Exhaustive minimum over all toggle subsets (Gray-code walk). n <= 5.
int brute_force_link_oracle(const DirectedGraph& g, LinkMode mode = LinkMode::AddRemove);

/// Applies x to g; used by the solvers and handy for checking candidate vectors.
LinkPerturbation apply_link_solution(const DirectedGraph& g, const IlpProblem& problem,
                                     const Eigen::VectorXd& x);

}  // namespace minreact
