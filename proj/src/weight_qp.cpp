#include "minreact/weight_qp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace minreact {

namespace {

void require_laplacian(const Eigen::MatrixXd& L) {
  if (L.rows() != L.cols() || L.rows() == 0) throw std::invalid_argument("Laplacian must be a non-empty square matrix");
  if (!L.allFinite()) throw std::invalid_argument("Laplacian has NaN or Inf entries");
}

}  // namespace

double auto_epsilon(const Eigen::MatrixXd& L) {
  double w = std::numeric_limits<double>::infinity();
  for (Eigen::Index j = 0; j < L.cols(); ++j)
    for (Eigen::Index i = 0; i < L.rows(); ++i)
      if (i != j && L(i, j) > 0.0) w = std::min(w, L(i, j));
  return 1e-3 * (std::isfinite(w) ? w : 1.0);
}

QpProblem build_qp(const Eigen::MatrixXd& L, double epsilon) {
  require_laplacian(L);
  if (!(epsilon > 0.0)) throw std::invalid_argument("build_qp: epsilon must be positive");
  const int n = int(L.rows());
  const int dim = n * n;

  QpProblem q;
  q.n = n;
  q.dim = dim;
  q.epsilon = epsilon;
  for (int v = 0; v < dim; ++v)
    if (L(v % n, v / n) == 0.0) q.zero_entries.push_back(v);
  const int m = int(q.zero_entries.size());

  q.K_eq = Eigen::MatrixXd::Zero(2 * n + m, dim);
  q.b_eq = Eigen::VectorXd::Zero(2 * n + m);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      q.K_eq(i, i + n * j) = 1.0;      // K1: row sums of P
      q.K_eq(n + j, i + n * j) = 1.0;  // K2: column sums of P
    }
  q.b_eq.segment(n, n) = -L.colwise().sum().transpose();
  for (int r = 0; r < m; ++r) q.K_eq(2 * n + r, q.zero_entries[r]) = 1.0;

  const int support = dim - m;
  q.H_ineq = Eigen::MatrixXd::Zero(support, dim);
  q.h_ineq = Eigen::VectorXd::Zero(support);
  int row = 0;
  for (int v = 0; v < dim; ++v) {
    const int i = v % n, j = v / n;
    const double lij = L(i, j);
    if (lij == 0.0) continue;
    if (i != j) {  // L + P >= eps
      q.H_ineq(row, v) = -1.0;
      q.h_ineq[row] = lij - epsilon;
    } else {       // L + P <= -eps
      q.H_ineq(row, v) = 1.0;
      q.h_ineq[row] = -epsilon - lij;
    }
    ++row;
  }
  return q;
}

QpSolution solve_qp_problem(const QpProblem& problem, const QpSettings& settings) {
  const Eigen::MatrixXd G = 2.0 * Eigen::MatrixXd::Identity(problem.dim, problem.dim);
  const Eigen::VectorXd c = Eigen::VectorXd::Zero(problem.dim);
  return solve_qp(G, c, problem.K_eq, problem.b_eq, problem.H_ineq, problem.h_ineq, settings);
}

WeightBalanceResult solve_weight_perturbation(const Eigen::MatrixXd& L, double epsilon) {
  require_laplacian(L);
  if (!is_strongly_connected(graph_from_laplacian(L))) return Infeasible{kNotStronglyConnected};

  const QpProblem problem = build_qp(L, epsilon);
  const QpSolution sol = solve_qp_problem(problem);
  if (sol.status != QpStatus::Optimal) {
    const QpSolution retry = solve_qp_problem(build_qp(L, epsilon / 10.0));
    if (retry.status == QpStatus::Optimal) return Infeasible{kEpsilonTooLarge};
    return Infeasible{"solver failed: " + to_string(sol.status)};
  }

  const int n = problem.n;
  WeightPerturbation out;
  out.P = Eigen::Map<const Eigen::MatrixXd>(sol.x.data(), n, n);
  for (int v : problem.zero_entries) out.P(v % n, v / n) = 0.0;
  out.L_star = L + out.P;
  out.objective = out.P.squaredNorm();
  out.kkt_residual = sol.kkt_residual;
  return out;
}

std::vector<int> shortest_path(const DirectedGraph& g, int from, int to) {
  std::vector<int> parent(g.size(), -1);
  std::vector<char> seen(g.size(), 0);
  std::queue<int> frontier;
  frontier.push(from);
  seen[from] = 1;
  while (!frontier.empty() && !seen[to]) {
    int v = frontier.front();
    frontier.pop();
    for (int w : g.successors(v)) {
      if (seen[w]) continue;
      seen[w] = 1;
      parent[w] = v;
      frontier.push(w);
    }
  }
  if (!seen[to]) return {};
  std::vector<int> path{to};
  while (path.back() != from) path.push_back(parent[path.back()]);
  std::reverse(path.begin(), path.end());
  return path;
}

WeightPerturbation construct_feasible_by_cycles(const Eigen::MatrixXd& L) {
  require_laplacian(L);
  const DirectedGraph g = graph_from_laplacian(L);
  if (!is_strongly_connected(g))
    throw GraphError("construct_feasible_by_cycles: graph is not strongly connected");

  const int n = g.size();
  WeightPerturbation out;
  out.P = Eigen::MatrixXd::Zero(n, n);
  for (const Arc& e : g.arcs()) {
    const auto path = shortest_path(g, e.target, e.source);
    for (std::size_t k = 0; k + 1 < path.size(); ++k) out.P(path[k + 1], path[k]) += e.weight;
  }
  for (int i = 0; i < n; ++i) {
    out.P(i, i) = 0.0;
    out.P(i, i) = -out.P.row(i).sum();
  }
  out.L_star = L + out.P;
  out.objective = out.P.squaredNorm();
  return out;
}

FlowDecomposition decompose_flow(const Eigen::MatrixXd& L_star, double tol) {
  require_laplacian(L_star);
  const int n = int(L_star.rows());
  // flow(s, t) on arc s -> t
  Eigen::MatrixXd flow = Eigen::MatrixXd::Zero(n, n);
  int arcs = 0;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t && L_star(t, s) > 0.0) {
        flow(s, t) = L_star(t, s);
        ++arcs;
      }
  const double zero = tol * std::max(1.0, flow.maxCoeff());

  FlowDecomposition out;
  auto next_arc = [&](int v) {
    int best = -1;
    for (int t = 0; t < n; ++t)
      if (flow(v, t) > zero && (best < 0 || flow(v, t) > flow(v, best))) best = t;
    return best;
  };

  while (int(out.cycles.size()) <= arcs) {
    int start = -1;
    for (int s = 0; s < n && start < 0; ++s)
      if (next_arc(s) >= 0) start = s;
    if (start < 0) break;

    std::vector<int> walk{start};
    std::vector<int> position(n, -1);
    position[start] = 0;
    int cur = start;
    bool stalled = false;
    while (true) {
      int nxt = next_arc(cur);
      if (nxt < 0) {
        stalled = true;
        break;
      }
      if (position[nxt] >= 0) {
        walk.erase(walk.begin(), walk.begin() + position[nxt]);
        break;
      }
      position[nxt] = int(walk.size());
      walk.push_back(nxt);
      cur = nxt;
    }
    if (stalled) break;

    FlowCycle cycle;
    cycle.nodes = walk;
    cycle.flow = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < walk.size(); ++k)
      cycle.flow = std::min(cycle.flow, flow(walk[k], walk[(k + 1) % walk.size()]));
    for (std::size_t k = 0; k < walk.size(); ++k) {
      double& f = flow(walk[k], walk[(k + 1) % walk.size()]);
      f = f - cycle.flow <= zero ? 0.0 : f - cycle.flow;
    }
    out.cycles.push_back(std::move(cycle));
  }

  out.residual = flow.cwiseAbs().maxCoeff();
  out.success = out.residual <= zero && int(out.cycles.size()) <= std::max(arcs, 0);
  return out;
}

bool verify_flow_decomposition(const Eigen::MatrixXd& L_star, double tol) {
  return decompose_flow(L_star, tol).success;
}

}  // namespace minreact
