#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace minreact {

/// A directed link `source -> target`. In matrix terms it sets A(target, source) = weight.
struct Arc {
  int source = 0;
  int target = 0;
  double weight = 1.0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

class GraphError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Simple weighted digraph: no self-loops, at most one arc per ordered pair,
/// strictly positive weights. Arcs are kept sorted by (source, target).
/// Immutable after construction.
class DirectedGraph {
 public:
  DirectedGraph() = default;
  DirectedGraph(int n, std::vector<Arc> arcs);

  int size() const { return n_; }
  const std::vector<Arc>& arcs() const { return arcs_; }
  std::size_t num_arcs() const { return arcs_.size(); }

  bool has_arc(int source, int target) const;
  /// Weight of source->target, 0 when absent.
  double weight(int source, int target) const;
  /// True when every weight is exactly 1.
  bool is_unweighted() const;

  /// Targets reachable in one hop from `source`, increasing.
  const std::vector<int>& successors(int source) const { return out_[source]; }
  const std::vector<int>& predecessors(int target) const { return in_[target]; }

  friend bool operator==(const DirectedGraph& a, const DirectedGraph& b) {
    return a.n_ == b.n_ && a.arcs_ == b.arcs_;
  }

 private:
  int n_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
};

struct DegreeProfile {
  Eigen::VectorXd indeg;
  Eigen::VectorXd outdeg;
  Eigen::VectorXd imbalance;  // indeg - outdeg
};

/// Parses the edge-list text format: one `src dst [weight]` per line, `#` starts a
/// comment, an optional `n=<count>` line fixes the node count.
DirectedGraph parse_edge_list(std::string_view text);
std::string format_edge_list(const DirectedGraph& g);

/// Adjacency matrix, A(i, j) = weight of arc j -> i.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> adjacency(const DirectedGraph& g) {
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> a =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(g.size(), g.size());
  for (const Arc& e : g.arcs()) a(e.target, e.source) = Scalar(e.weight);
  return a;
}

/// L = A - D with D = diag(row sums of A); rows of L sum to zero.
template <typename Scalar = double>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> laplacian(const DirectedGraph& g) {
  auto l = adjacency<Scalar>(g);
  l.diagonal() = -l.rowwise().sum();
  return l;
}

/// Inverse of laplacian(): arcs j -> i for every positive off-diagonal L(i, j).
/// Entries with |L(i, j)| <= drop_tol are treated as absent.
DirectedGraph graph_from_laplacian(const Eigen::MatrixXd& l, double drop_tol = 0.0);

DegreeProfile degrees(const DirectedGraph& g);

/// Scale-aware default: 1e-9 for unweighted graphs, 1e-9 * max|L| otherwise.
double default_balance_tolerance(const DirectedGraph& g);
bool is_balanced(const DirectedGraph& g, double tol);
inline bool is_balanced(const DirectedGraph& g) { return is_balanced(g, default_balance_tolerance(g)); }

/// Every ordered pair (i != j) not in g, weight 1. Throws GraphError on weighted input.
DirectedGraph complement(const DirectedGraph& g);

bool has_directed_spanning_tree(const DirectedGraph& g);
/// Component id per node (Tarjan); ids are in reverse topological order of the condensation.
std::vector<int> strongly_connected_components(const DirectedGraph& g);
bool is_strongly_connected(const DirectedGraph& g);

/// Each ordered pair i != j is an arc independently with probability p; weight 1.
DirectedGraph erdos_renyi(int n, double p, std::uint64_t seed);

DirectedGraph complete_digraph(int n);
DirectedGraph directed_path(int n);
DirectedGraph directed_cycle(int n, double weight = 1.0);

}  // namespace minreact
