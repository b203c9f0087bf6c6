#pragma once

#include "minreact/graph.hpp"
#include "minreact/link_ilp.hpp"
#include "minreact/spectral.hpp"
#include "minreact/weight_qp.hpp"

#include "json.hpp"

#include <string>

namespace minreact {

using json = nlohmann::json;

/// {"n": n, "arcs": [[s, d, w], ...]}
json graph_to_json(const DirectedGraph& g);
/// Accepts the graph object itself or any report carrying it under "graph".
DirectedGraph graph_from_json(const json& j);

/// Reads a JSON graph (first non-blank character '{') or the edge-list format.
DirectedGraph read_graph(const std::string& path);
DirectedGraph parse_graph_text(const std::string& text);

json matrix_to_json(const Eigen::MatrixXd& m);
Eigen::MatrixXd matrix_from_json(const json& j);

/// {reactivity, minimally_reactive, column_sum_residual}
json to_json(const ReactivityReport<double>& r);
/// {P, L_star, objective, feasible, reason, graph}; P/L_star/objective/graph are null when infeasible.
json to_json(const WeightBalanceResult& r);
/// {added: [[s, d], ...], removed: [[s, d], ...], J_star, psi, graph}
json to_json(const LinkPerturbation& p, int n);

}  // namespace minreact
