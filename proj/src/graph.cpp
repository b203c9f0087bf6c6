#include "minreact/graph.hpp"

#include "minreact/random.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace minreact {

DirectedGraph::DirectedGraph(int n, std::vector<Arc> arcs) : n_(n), arcs_(std::move(arcs)) {
  if (n < 1) throw GraphError("graph must have at least one node");
  for (const Arc& e : arcs_) {
    if (e.source < 0 || e.source >= n || e.target < 0 || e.target >= n)
      throw GraphError("arc " + std::to_string(e.source) + " -> " + std::to_string(e.target) +
                       " out of range for n=" + std::to_string(n));
    if (e.source == e.target) throw GraphError("self-loop at node " + std::to_string(e.source));
    if (!(e.weight > 0.0) || !std::isfinite(e.weight))
      throw GraphError("non-positive weight on arc " + std::to_string(e.source) + " -> " +
                       std::to_string(e.target));
  }
  std::sort(arcs_.begin(), arcs_.end(), [](const Arc& a, const Arc& b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (std::size_t k = 1; k < arcs_.size(); ++k)
    if (arcs_[k].source == arcs_[k - 1].source && arcs_[k].target == arcs_[k - 1].target)
      throw GraphError("duplicate arc " + std::to_string(arcs_[k].source) + " -> " +
                       std::to_string(arcs_[k].target));
  out_.assign(n, {});
  in_.assign(n, {});
  for (const Arc& e : arcs_) {
    out_[e.source].push_back(e.target);
    in_[e.target].push_back(e.source);
  }
  for (auto& v : in_) std::sort(v.begin(), v.end());
}

bool DirectedGraph::has_arc(int source, int target) const {
  const auto& s = out_[source];
  return std::binary_search(s.begin(), s.end(), target);
}

double DirectedGraph::weight(int source, int target) const {
  auto it = std::lower_bound(arcs_.begin(), arcs_.end(), Arc{source, target, 0.0},
                             [](const Arc& a, const Arc& b) {
                               return a.source != b.source ? a.source < b.source
                                                           : a.target < b.target;
                             });
  if (it != arcs_.end() && it->source == source && it->target == target) return it->weight;
  return 0.0;
}

bool DirectedGraph::is_unweighted() const {
  return std::all_of(arcs_.begin(), arcs_.end(), [](const Arc& e) { return e.weight == 1.0; });
}

namespace {

std::string trim(std::string_view s) {
  auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void fail_at(int line, const std::string& what) {
  throw GraphError("line " + std::to_string(line) + ": " + what);
}

}  // namespace

DirectedGraph parse_edge_list(std::string_view text) {
  std::vector<Arc> arcs;
  std::map<std::pair<int, int>, int> first_line;
  int header_n = -1;
  int max_index = -1;
  int line_no = 0;

  std::istringstream in{std::string(text)};
  std::string raw;
  while (std::getline(in, raw)) {
    ++line_no;
    if (auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::string line = trim(raw);
    if (line.empty()) continue;

    if (line[0] == 'n') {
      std::string rest = line.substr(1);
      std::erase_if(rest, [](char c) { return c == ' ' || c == '\t'; });
      std::istringstream hs(rest.size() > 1 && rest[0] == '=' ? rest.substr(1) : std::string());
      long long v = 0;
      if (!(hs >> v) || !hs.eof() || v < 1) fail_at(line_no, "malformed header '" + line + "'");
      if (header_n != -1) fail_at(line_no, "duplicate node-count header");
      header_n = int(v);
      continue;
    }

    std::istringstream ls(line);
    long long s = 0, d = 0;
    double w = 1.0;
    if (!(ls >> s >> d)) fail_at(line_no, "expected 'src dst [weight]', got '" + line + "'");
    if (!(ls >> std::ws).eof()) {
      if (!(ls >> w)) fail_at(line_no, "malformed weight in '" + line + "'");
      if (!(ls >> std::ws).eof()) fail_at(line_no, "trailing tokens in '" + line + "'");
    }
    if (s < 0 || d < 0 || s > 1'000'000 || d > 1'000'000)
      fail_at(line_no, "node index out of range in '" + line + "'");
    if (s == d) fail_at(line_no, "self-loop at node " + std::to_string(s));
    if (!(w > 0.0) || !std::isfinite(w)) fail_at(line_no, "non-positive weight in '" + line + "'");
    auto [it, fresh] = first_line.try_emplace({int(s), int(d)}, line_no);
    if (!fresh)
      fail_at(line_no, "duplicate arc " + std::to_string(s) + " -> " + std::to_string(d) +
                           " (first on line " + std::to_string(it->second) + ")");
    arcs.push_back({int(s), int(d), w});
    max_index = std::max(max_index, int(std::max(s, d)));
  }

  int n = header_n != -1 ? header_n : max_index + 1;
  if (n < 1) throw GraphError("empty edge list and no node-count header");
  if (max_index >= n)
    throw GraphError("node index " + std::to_string(max_index) + " exceeds header n=" +
                     std::to_string(n));
  return DirectedGraph(n, std::move(arcs));
}

std::string format_edge_list(const DirectedGraph& g) {
  std::ostringstream os;
  os.precision(17);
  os << "n=" << g.size() << '\n';
  for (const Arc& e : g.arcs()) {
    os << e.source << ' ' << e.target;
    if (e.weight != 1.0) os << ' ' << e.weight;
    os << '\n';
  }
  return os.str();
}

DirectedGraph graph_from_laplacian(const Eigen::MatrixXd& l, double drop_tol) {
  if (l.rows() != l.cols()) throw GraphError("Laplacian must be square");
  std::vector<Arc> arcs;
  for (int j = 0; j < l.cols(); ++j)
    for (int i = 0; i < l.rows(); ++i)
      if (i != j && l(i, j) > drop_tol) arcs.push_back({j, i, l(i, j)});
  return DirectedGraph(int(l.rows()), std::move(arcs));
}

DegreeProfile degrees(const DirectedGraph& g) {
  DegreeProfile d;
  d.indeg = Eigen::VectorXd::Zero(g.size());
  d.outdeg = Eigen::VectorXd::Zero(g.size());
  for (const Arc& e : g.arcs()) {
    d.indeg[e.target] += e.weight;
    d.outdeg[e.source] += e.weight;
  }
  d.imbalance = d.indeg - d.outdeg;
  return d;
}

double default_balance_tolerance(const DirectedGraph& g) {
  if (g.is_unweighted()) return 1e-9;
  double scale = 0.0;
  auto d = degrees(g);
  for (const Arc& e : g.arcs()) scale = std::max(scale, e.weight);
  if (d.indeg.size() > 0) scale = std::max(scale, d.indeg.maxCoeff());
  return 1e-9 * std::max(scale, 1.0);
}

bool is_balanced(const DirectedGraph& g, double tol) {
  auto d = degrees(g);
  return d.imbalance.size() == 0 || d.imbalance.cwiseAbs().maxCoeff() <= tol;
}

DirectedGraph complement(const DirectedGraph& g) {
  if (!g.is_unweighted()) throw GraphError("complement is defined for unweighted graphs only");
  std::vector<Arc> arcs;
  for (int s = 0; s < g.size(); ++s)
    for (int t = 0; t < g.size(); ++t)
      if (s != t && !g.has_arc(s, t)) arcs.push_back({s, t, 1.0});
  return DirectedGraph(g.size(), std::move(arcs));
}

std::vector<int> strongly_connected_components(const DirectedGraph& g) {
  const int n = g.size();
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1), stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0, ncomp = 0;

  // Iterative Tarjan: frames hold (node, next successor position).
  std::vector<std::pair<int, std::size_t>> frames;
  for (int root = 0; root < n; ++root) {
    if (index[root] != -1) continue;
    frames.push_back({root, 0});
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = 1;
    while (!frames.empty()) {
      auto& [v, pos] = frames.back();
      const auto& succ = g.successors(v);
      if (pos < succ.size()) {
        int w = succ[pos++];
        if (index[w] == -1) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = 1;
          frames.push_back({w, 0});
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
        continue;
      }
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = ncomp;
        } while (w != v);
        ++ncomp;
      }
      int finished = v;
      frames.pop_back();
      if (!frames.empty()) {
        int parent = frames.back().first;
        low[parent] = std::min(low[parent], low[finished]);
      }
    }
  }
  return comp;
}

bool is_strongly_connected(const DirectedGraph& g) {
  auto comp = strongly_connected_components(g);
  return std::all_of(comp.begin(), comp.end(), [](int c) { return c == 0; });
}

bool has_directed_spanning_tree(const DirectedGraph& g) {
  // A root exists iff the condensation has exactly one source component.
  auto comp = strongly_connected_components(g);
  int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
  std::vector<char> has_incoming(ncomp, 0);
  for (const Arc& e : g.arcs())
    if (comp[e.source] != comp[e.target]) has_incoming[comp[e.target]] = 1;
  return std::count(has_incoming.begin(), has_incoming.end(), 0) == 1;
}

DirectedGraph erdos_renyi(int n, double p, std::uint64_t seed) {
  if (!(p >= 0.0 && p <= 1.0)) throw GraphError("connection probability must lie in [0, 1]");
  Rng rng(seed);
  std::vector<Arc> arcs;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t && bernoulli(rng, p)) arcs.push_back({s, t, 1.0});
  return DirectedGraph(n, std::move(arcs));
}

DirectedGraph complete_digraph(int n) {
  std::vector<Arc> arcs;
  for (int s = 0; s < n; ++s)
    for (int t = 0; t < n; ++t)
      if (s != t) arcs.push_back({s, t, 1.0});
  return DirectedGraph(n, std::move(arcs));
}

DirectedGraph directed_path(int n) {
  std::vector<Arc> arcs;
  for (int s = 0; s + 1 < n; ++s) arcs.push_back({s, s + 1, 1.0});
  return DirectedGraph(n, std::move(arcs));
}

DirectedGraph directed_cycle(int n, double weight) {
  std::vector<Arc> arcs;
  for (int s = 0; s < n && n > 1; ++s) arcs.push_back({s, (s + 1) % n, weight});
  return DirectedGraph(n, std::move(arcs));
}

}  // namespace minreact
