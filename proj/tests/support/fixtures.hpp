#pragma once

// Shared fixtures and independent oracles for the test suites.

#include "minreact/graph.hpp"
#include "minreact/random.hpp"

#include <Eigen/Core>

#include <algorithm>
#include <vector>

namespace minreact::testing {

/// Weighted 5-node network and its published minimum-norm balanced counterpart (2 decimals).
inline Eigen::MatrixXd five_node_laplacian() {
  Eigen::MatrixXd l(5, 5);
  l << -10, 0, 5, 0, 5,
        0, -2, 0, 2, 0,
        0, 0, -5, 0, 5,
        1, 3, 0, -4, 0,
        0, 0, 0, 1, -1;
  return l;
}

inline Eigen::MatrixXd five_node_published_optimum() {
  Eigen::MatrixXd l(5, 5);
  l << -3.95, 0, 3.49, 0, 0.46,
        0, -1.76, 0, 1.76, 0,
        0, 0, -3.49, 0, 3.49,
        3.95, 1.76, 0, -5.71, 0,
        0, 0, 0, 3.95, -3.95;
  return l;
}

inline Eigen::VectorXd five_node_x0() {
  Eigen::VectorXd x(5);
  x << 0.0505, 0.7641, -0.7397, 0.4984, -1.9546;
  return x;
}

inline constexpr double kFiveNodeConsensus = -0.1024;
inline constexpr double kFiveNodeBalancedConsensus = -0.2763;

/// Balanced 4-node example with zero reactivity.
inline Eigen::MatrixXd four_node_balanced_laplacian() {
  Eigen::MatrixXd l(4, 4);
  l << -9, 0, 3, 6,
        5, -5, 0, 0,
        0, 5, -5, 0,
        4, 0, 2, -6;
  return l;
}

/// n = 5 digraph, all seven arcs unidirectional: optimal addition 3, removal 3, combined 2.
inline DirectedGraph mixed_perturbation_graph() {
  return DirectedGraph(5, {{0, 3, 1}, {1, 0, 1}, {2, 1, 1}, {2, 3, 1}, {3, 1, 1}, {3, 4, 1}, {4, 1, 1}});
}

inline DirectedGraph single_arc() { return DirectedGraph(2, {{0, 1, 1.0}}); }
inline DirectedGraph dyad(double w = 1.0) { return DirectedGraph(2, {{0, 1, w}, {1, 0, w}}); }

/// Transitive closure by Floyd-Warshall on the boolean adjacency (reach(s, t): s ~> t).
inline std::vector<std::vector<char>> reachability(const DirectedGraph& g) {
  const int n = g.size();
  std::vector<std::vector<char>> r(n, std::vector<char>(n, 0));
  for (int v = 0; v < n; ++v) r[v][v] = 1;
  for (const Arc& e : g.arcs()) r[e.source][e.target] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      if (r[i][k])
        for (int j = 0; j < n; ++j)
          if (r[k][j]) r[i][j] = 1;
  return r;
}

inline bool oracle_has_root(const DirectedGraph& g) {
  auto r = reachability(g);
  for (const auto& row : r)
    if (std::all_of(row.begin(), row.end(), [](char c) { return c != 0; })) return true;
  return false;
}

inline bool oracle_strongly_connected(const DirectedGraph& g) {
  auto r = reachability(g);
  for (const auto& row : r)
    if (!std::all_of(row.begin(), row.end(), [](char c) { return c != 0; })) return false;
  return true;
}

/// Random weighted digraph (weights in [w_lo, w_hi]) resampled until it has a spanning tree.
inline DirectedGraph random_rooted_digraph(Rng& rng, int n_min, int n_max, double w_lo = 0.5, double w_hi = 2.0,
                                           double p_lo = 0.1, double p_hi = 0.6) {
  while (true) {
    const int n = uniform_int(rng, n_min, n_max);
    const double p = uniform(rng, p_lo, p_hi);
    std::vector<Arc> arcs;
    for (int s = 0; s < n; ++s)
      for (int t = 0; t < n; ++t)
        if (s != t && bernoulli(rng, p)) arcs.push_back({s, t, uniform(rng, w_lo, w_hi)});
    DirectedGraph g(n, std::move(arcs));
    if (oracle_has_root(g)) return g;
  }
}

/// Superposition of random weighted directed cycles: balanced by construction.
inline DirectedGraph random_balanced_digraph(Rng& rng, int n_min, int n_max, int cycles_max = 6) {
  const int n = uniform_int(rng, n_min, n_max);
  Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);  // w(s, t) on arc s -> t
  const int cycles = uniform_int(rng, 1, cycles_max);
  std::vector<int> nodes(n);
  for (int c = 0; c < cycles; ++c) {
    for (int i = 0; i < n; ++i) nodes[i] = i;
    for (int i = n - 1; i > 0; --i) std::swap(nodes[i], nodes[uniform_int(rng, 0, i)]);
    const int len = uniform_int(rng, 2, n);
    const double weight = uniform(rng, 0.5, 2.0);
    for (int k = 0; k < len; ++k) w(nodes[k], nodes[(k + 1) % len]) += weight;
  }
  std::vector<Arc> arcs;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (w(s, t) > 0.0) arcs.push_back({s, t, w(s, t)});
  return DirectedGraph(n, std::move(arcs));
}

/// Unweighted Erdos-Renyi digraph with a random p.
inline DirectedGraph random_unweighted(Rng& rng, int n_min, int n_max) {
  const int n = uniform_int(rng, n_min, n_max);
  return erdos_renyi(n, uniform(rng, 0.0, 1.0), rng());
}

}  // namespace minreact::testing
