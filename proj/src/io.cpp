#include "minreact/io.hpp"

#include <fstream>
#include <sstream>

namespace minreact {

json graph_to_json(const DirectedGraph& g) {
  json arcs = json::array();
  for (const Arc& e : g.arcs()) arcs.push_back({e.source, e.target, e.weight});
  return {{"n", g.size()}, {"arcs", arcs}};
}

DirectedGraph graph_from_json(const json& j) {
  if (!j.is_object()) throw GraphError("graph JSON must be an object");
  if (j.contains("graph") && j["graph"].is_object()) return graph_from_json(j["graph"]);
  if (!j.contains("n") || !j.contains("arcs")) throw GraphError("graph JSON needs 'n' and 'arcs'");
  std::vector<Arc> arcs;
  try {
    for (const auto& a : j.at("arcs")) {
      if (!a.is_array() || a.size() < 2 || a.size() > 3) throw GraphError("arc must be [src, dst] or [src, dst, w]");
      arcs.push_back({a[0].get<int>(), a[1].get<int>(), a.size() == 3 ? a[2].get<double>() : 1.0});
    }
    return DirectedGraph(j.at("n").get<int>(), std::move(arcs));
  } catch (const json::exception& e) {
    throw GraphError(std::string("malformed graph JSON: ") + e.what());
  }
}

DirectedGraph parse_graph_text(const std::string& text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') {
    json j;
    try {
      j = json::parse(text);
    } catch (const json::exception& e) {
      throw GraphError(std::string("malformed JSON: ") + e.what());
    }
    return graph_from_json(j);
  }
  return parse_edge_list(text);
}

DirectedGraph read_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_graph_text(ss.str());
  } catch (const GraphError& e) {
    throw GraphError(path + ": " + e.what());
  }
}

json matrix_to_json(const Eigen::MatrixXd& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXd matrix_from_json(const json& j) {
  const auto rows = Eigen::Index(j.size());
  const auto cols = rows ? Eigen::Index(j[0].size()) : 0;
  Eigen::MatrixXd m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (Eigen::Index(j[i].size()) != cols) throw std::invalid_argument("ragged matrix in JSON");
    for (Eigen::Index k = 0; k < cols; ++k) m(i, k) = j[i][k].get<double>();
  }
  return m;
}

json to_json(const ReactivityReport<double>& r) {
  return {{"reactivity", r.reactivity},
          {"minimally_reactive", r.minimally_reactive},
          {"column_sum_residual", r.column_sum_residual}};
}

json to_json(const WeightBalanceResult& r) {
  if (const auto* bad = std::get_if<Infeasible>(&r))
    return {{"P", nullptr}, {"L_star", nullptr}, {"objective", nullptr}, {"feasible", false},
            {"reason", bad->reason}, {"graph", nullptr}};
  const auto& w = std::get<WeightPerturbation>(r);
  return {{"P", matrix_to_json(w.P)},
          {"L_star", matrix_to_json(w.L_star)},
          {"objective", w.objective},
          {"feasible", true},
          {"reason", nullptr},
          {"graph", graph_to_json(graph_from_laplacian(w.L_star))}};
}

json to_json(const LinkPerturbation& p, int n) {
  json added = json::array(), removed = json::array();
  for (const Arc& e : p.added) added.push_back({e.source, e.target});
  for (const Arc& e : p.removed) removed.push_back({e.source, e.target});
  return {{"added", added},
          {"removed", removed},
          {"J_star", p.J_star},
          {"psi", double(p.J_star) / double(n)},
          {"graph", graph_to_json(p.A_star)}};
}

}  // namespace minreact
