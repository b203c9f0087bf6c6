#include "minreact/link_ilp.hpp"

#include "minreact/simplex.hpp"

#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>

namespace minreact {

namespace {

constexpr double kIntegralityTol = 1e-6;
constexpr double kObjectiveTol = 1e-7;

bool is_integral(const Eigen::VectorXd& x) {
  for (Eigen::Index k = 0; k < x.size(); ++k)
    if (std::abs(x[k] - std::round(x[k])) > kIntegralityTol) return false;
  return true;
}

Eigen::VectorXd rounded(const Eigen::VectorXd& x) { return x.array().round().matrix(); }

struct Incumbent {
  double value = std::numeric_limits<double>::infinity();
  Eigen::VectorXd x;
};

class IntegerSolver {
 public:
  explicit IntegerSolver(const IlpProblem& p) : p_(p) {}

  std::optional<Incumbent> solve(const Eigen::VectorXd& lower, const Eigen::VectorXd& upper,
                                 LpSolution* root = nullptr) {
    Incumbent best;
    branch(lower, upper, best, root);
    if (!std::isfinite(best.value)) return std::nullopt;
    return best;
  }

  int lp_solves = 0;
  int branch_nodes = 0;

 private:
  void branch(Eigen::VectorXd lower, Eigen::VectorXd upper, Incumbent& best, LpSolution* root) {
    const LpSolution lp = solve_lp(p_.balance_rows, p_.rhs, p_.objective_weights, lower, upper);
    ++lp_solves;
    if (root) *root = lp;
    if (lp.status != LpStatus::Optimal) return;
    if (lp.objective >= best.value - kObjectiveTol) return;
    if (is_integral(lp.x)) {
      best.value = p_.objective_weights.dot(rounded(lp.x));
      best.x = rounded(lp.x);
      return;
    }
    Eigen::Index k = 0;
    while (std::abs(lp.x[k] - std::round(lp.x[k])) <= kIntegralityTol) ++k;
    ++branch_nodes;
    Eigen::VectorXd up0 = upper;
    up0[k] = 0.0;
    branch(lower, up0, best, nullptr);
    Eigen::VectorXd lo1 = lower;
    lo1[k] = 1.0;
    branch(lo1, upper, best, nullptr);
  }

  const IlpProblem& p_;
};

}  // namespace

double default_bias(int n) { return 0.5 / (double(n) * double(n)); }

IlpProblem build_link_ilp(const DirectedGraph& g, LinkMode mode, double bias_epsilon) {
  if (!g.is_unweighted()) throw GraphError("link perturbation requires an unweighted graph");
  const int n = g.size();
  if (mode == LinkMode::AddRemoveBiased && !(bias_epsilon > 0.0 && bias_epsilon < 1.0 / (double(n) * n)))
    throw std::invalid_argument("bias epsilon must lie in (0, 1/n^2)");

  IlpProblem p;
  p.mode = mode;
  p.n = n;
  const bool with_add = mode != LinkMode::Remove;
  const bool with_remove = mode != LinkMode::Add;
  if (with_add)
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (s != t && !g.has_arc(s, t)) p.variables.push_back({s, t, true});
  if (with_remove)
    for (const Arc& e : g.arcs()) p.variables.push_back({e.source, e.target, false});

  const auto nv = Eigen::Index(p.variables.size());
  p.balance_rows = Eigen::MatrixXd::Zero(n, nv);
  p.objective_weights = Eigen::VectorXd::Ones(nv);
  const double bias = mode == LinkMode::AddRemoveBiased ? bias_epsilon : 0.0;
  for (Eigen::Index k = 0; k < nv; ++k) {
    const LinkVariable& v = p.variables[k];
    const double sign = v.add ? 1.0 : -1.0;
    p.balance_rows(v.target, k) += sign;
    p.balance_rows(v.source, k) -= sign;
    p.objective_weights[k] = v.add ? 1.0 - bias : 1.0 + bias;
  }
  const DegreeProfile deg = degrees(g);
  p.rhs = deg.outdeg - deg.indeg;
  return p;
}

IlpSolution solve_link_ilp(const IlpProblem& problem) {
  const auto nv = Eigen::Index(problem.variables.size());
  IntegerSolver solver(problem);
  Eigen::VectorXd lower = Eigen::VectorXd::Zero(nv);
  Eigen::VectorXd upper = Eigen::VectorXd::Ones(nv);

  IlpSolution out;
  LpSolution root;
  auto opt = solver.solve(lower, upper, &root);
  if (!opt) throw std::runtime_error("link program infeasible; the symmetrization witness should always exist");
  out.relaxation = root.x;
  out.relaxation_integral = root.status == LpStatus::Optimal && is_integral(root.x);
  const double target = opt->value;

  Eigen::VectorXd x = opt->x;
  for (Eigen::Index k = 0; k < nv; ++k) {
    upper[k] = 0.0;
    if (x[k] == 0.0) continue;
    auto trial = solver.solve(lower, upper);
    if (trial && trial->value <= target + kObjectiveTol) {
      x = trial->x;
    } else {
      upper[k] = 1.0;
      lower[k] = 1.0;
    }
  }

  out.x = x;
  out.objective = problem.objective_weights.dot(x);
  out.lp_solves = solver.lp_solves;
  out.branch_nodes = solver.branch_nodes;
  return out;
}

LinkPerturbation apply_link_solution(const DirectedGraph& g, const IlpProblem& problem,
                                     const Eigen::VectorXd& x) {
  LinkPerturbation out;
  std::vector<Arc> arcs;
  for (Eigen::Index k = 0; k < x.size(); ++k) {
    if (x[k] < 0.5) continue;
    const LinkVariable& v = problem.variables[k];
    (v.add ? out.added : out.removed).push_back({v.source, v.target, 1.0});
  }
  for (const Arc& e : g.arcs()) {
    bool gone = false;
    for (const Arc& r : out.removed) gone = gone || (r.source == e.source && r.target == e.target);
    if (!gone) arcs.push_back(e);
  }
  arcs.insert(arcs.end(), out.added.begin(), out.added.end());
  out.A_star = DirectedGraph(g.size(), std::move(arcs));
  out.J_star = int(out.added.size() + out.removed.size());
  return out;
}

namespace {

LinkPerturbation solve_mode(const DirectedGraph& g, LinkMode mode, double bias) {
  const IlpProblem p = build_link_ilp(g, mode, bias);
  const IlpSolution s = solve_link_ilp(p);
  LinkPerturbation out = apply_link_solution(g, p, s.x);
  out.relaxation_integral = s.relaxation_integral;
  return out;
}

}  // namespace

LinkPerturbation solve_link_addition(const DirectedGraph& g) { return solve_mode(g, LinkMode::Add, 0.0); }

LinkPerturbation solve_link_removal(const DirectedGraph& g) { return solve_mode(g, LinkMode::Remove, 0.0); }

LinkPerturbation solve_link_addrem(const DirectedGraph& g, double bias_epsilon) {
  if (bias_epsilon < 0.0) throw std::invalid_argument("bias epsilon must be non-negative");
  return bias_epsilon == 0.0 ? solve_mode(g, LinkMode::AddRemove, 0.0)
                             : solve_mode(g, LinkMode::AddRemoveBiased, bias_epsilon);
}

int count_unidirectional(const DirectedGraph& g) {
  int c = 0;
  for (const Arc& e : g.arcs())
    if (!g.has_arc(e.target, e.source)) ++c;
  return c;
}

LinkPerturbation trivial_symmetrize(const DirectedGraph& g, TrivialMode mode) {
  if (!g.is_unweighted()) throw GraphError("link perturbation requires an unweighted graph");
  LinkPerturbation out;
  std::vector<Arc> arcs;
  for (const Arc& e : g.arcs()) {
    const bool lonely = !g.has_arc(e.target, e.source);
    if (lonely && mode == TrivialMode::Add) out.added.push_back({e.target, e.source, 1.0});
    if (lonely && mode == TrivialMode::Remove) out.removed.push_back(e);
    else arcs.push_back(e);
  }
  arcs.insert(arcs.end(), out.added.begin(), out.added.end());
  out.A_star = DirectedGraph(g.size(), std::move(arcs));
  out.J_star = int(out.added.size() + out.removed.size());
  return out;
}

double structural_reactivity(const DirectedGraph& g) {
  return double(solve_link_addrem(g, 0.0).J_star) / double(g.size());
}

int brute_force_link_oracle(const DirectedGraph& g, LinkMode mode) {
  if (g.size() > 5) throw std::invalid_argument("brute_force_link_oracle: n must be at most 5");
  if (!g.is_unweighted()) throw GraphError("link perturbation requires an unweighted graph");
  const int n = g.size();
  struct Toggle {
    int source, target, sign;  // +1 add, -1 remove
  };
  std::vector<Toggle> toggles;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t) {
      if (s == t) continue;
      const bool present = g.has_arc(s, t);
      if (!present && mode != LinkMode::Remove) toggles.push_back({s, t, +1});
      if (present && mode != LinkMode::Add) toggles.push_back({s, t, -1});
    }

  std::vector<int> imbalance(n, 0);  // indeg - outdeg
  for (const Arc& e : g.arcs()) {
    ++imbalance[e.target];
    --imbalance[e.source];
  }
  int nonzero = 0;
  for (int v : imbalance) nonzero += v != 0;
  int best = nonzero == 0 ? 0 : std::numeric_limits<int>::max();

  const std::uint64_t total = std::uint64_t(1) << toggles.size();
  std::vector<char> on(toggles.size(), 0);
  int chosen = 0;
  auto bump = [&](int node, int delta) {
    nonzero -= imbalance[node] != 0;
    imbalance[node] += delta;
    nonzero += imbalance[node] != 0;
  };
  for (std::uint64_t i = 1; i < total; ++i) {
    const int k = std::countr_zero(i);
    const int dir = on[k] ? -1 : +1;
    on[k] ^= 1;
    chosen += dir;
    bump(toggles[k].target, dir * toggles[k].sign);
    bump(toggles[k].source, -dir * toggles[k].sign);
    if (nonzero == 0 && chosen < best) best = chosen;
  }
  return best;
}

}  // namespace minreact
