#include "minreact/cli.hpp"

#include "minreact/experiments.hpp"
#include "minreact/io.hpp"
#include "minreact/link_ilp.hpp"
#include "minreact/random.hpp"
#include "minreact/simulate.hpp"
#include "minreact/spectral.hpp"
#include "minreact/weight_qp.hpp"

#include "CLI11.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace minreact::cli {

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Eigen::VectorXd parse_vector(std::string text) {
  for (char& c : text)
    if (c == ',' || c == ';' || c == '[' || c == ']') c = ' ';
  std::istringstream is(text);
  std::vector<double> values;
  std::string tok;
  while (is >> tok) {
    try {
      std::size_t used = 0;
      values.push_back(std::stod(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("malformed number '" + tok + "' in state vector");
    }
  }
  return Eigen::Map<Eigen::VectorXd>(values.data(), Eigen::Index(values.size()));
}

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw UsageError("cannot write '" + path + "'");
  f << content;
}

DirectedGraph load_input(const RunConfig& c) {
  if (c.input.empty()) throw UsageError(c.command + ": an input graph is required");
  try {
    return read_graph(c.input);
  } catch (const GraphError& e) {
    throw UsageError(e.what());
  }
}

/// Explicit x0, x0 file, or a standard normal draw from --seed.
Eigen::VectorXd initial_state(const RunConfig& c, int n) {
  Eigen::VectorXd x0;
  if (!c.x0.empty()) x0 = parse_vector(c.x0);
  else if (!c.x0_file.empty()) x0 = parse_vector(slurp(c.x0_file));
  else {
    Rng rng(derive_seed({c.seed, 0x78302d7374617465ULL}));
    x0.resize(n);
    for (int i = 0; i < n; ++i) {
      const double u1 = 1.0 - uniform01(rng), u2 = uniform01(rng);
      x0[i] = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
    }
  }
  if (x0.size() != n)
    throw UsageError("x0 has " + std::to_string(x0.size()) + " entries, graph has " + std::to_string(n) + " nodes");
  return x0;
}

int jobs_from(const RunConfig& c) {
  if (c.jobs > 0) return c.jobs;
  if (const char* env = std::getenv("MINREACT_JOBS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return int(v);
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

void emit(const RunConfig& c, std::ostream& out, const json& report) {
  const std::string text = report.dump(2) + "\n";
  out << text;
  if (!c.output.empty()) write_file(c.output, text);
}

int analyze(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DirectedGraph g = load_input(c);
  const Eigen::MatrixXd L = laplacian(g);
  json report = to_json(reactivity(L));
  report["n"] = g.size();
  report["arcs"] = g.num_arcs();
  report["balanced"] = is_balanced(g);
  report["strongly_connected"] = is_strongly_connected(g);
  report["has_spanning_tree"] = has_directed_spanning_tree(g);
  if (!c.x0.empty() || !c.x0_file.empty()) {
    const Eigen::VectorXd x0 = initial_state(c, g.size());
    const auto pred = consensus_value(L, x0);
    if (!pred.spanning_tree) err << "warning: no directed spanning tree; consensus value is best-effort\n";
    report["consensus_value"] = pred.consensus_value;
    report["left_vector"] = std::vector<double>(pred.left_vector.data(), pred.left_vector.data() + pred.left_vector.size());
  }
  emit(c, out, report);
  return kExitOk;
}

int balance_weights(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DirectedGraph g = load_input(c);
  const Eigen::MatrixXd L = laplacian(g);
  double eps = 0.0;
  if (c.epsilon == "auto") {
    eps = auto_epsilon(L);
  } else {
    try {
      eps = std::stod(c.epsilon);
    } catch (const std::exception&) {
      throw UsageError("--epsilon must be 'auto' or a positive number");
    }
    if (!(eps > 0.0)) throw UsageError("--epsilon must be positive");
  }
  const WeightBalanceResult result = solve_weight_perturbation(L, eps);
  json report = to_json(result);
  report["epsilon"] = eps;
  emit(c, out, report);
  if (const auto* bad = std::get_if<Infeasible>(&result)) {
    err << "error: " << bad->reason << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

int balance_links(const RunConfig& c, std::ostream& out, std::ostream&) {
  const DirectedGraph g = load_input(c);
  if (!g.is_unweighted()) throw UsageError("balance-links needs an unweighted graph");
  LinkPerturbation p;
  if (c.mode == "add") p = solve_link_addition(g);
  else if (c.mode == "remove") p = solve_link_removal(g);
  else if (c.mode == "both") {
    double bias = 0.0;
    if (c.prefer_add) bias = c.bias.value_or(default_bias(g.size()));
    try {
      p = solve_link_addrem(g, bias);
    } catch (const std::invalid_argument& e) {
      throw UsageError(e.what());
    }
  } else {
    throw UsageError("--mode must be add, remove or both");
  }
  json report = to_json(p, g.size());
  report["mode"] = c.mode;
  emit(c, out, report);
  return kExitOk;
}

json envelope_json(const NormEnvelope<double>& e) {
  return {{"initial_growth_rate", e.initial_growth_rate}, {"max_norm", e.max_norm}, {"monotone", e.monotone}};
}

int simulate_cmd(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DirectedGraph g = load_input(c);
  const Eigen::MatrixXd L = laplacian(g);
  const Eigen::VectorXd x0 = initial_state(c, g.size());
  if (!(c.sigma > 0.0)) throw UsageError("--sigma must be positive");
  const double dt = c.dt.value_or(default_step(L, c.sigma));
  const double horizon = c.horizon.value_or(default_horizon(L, c.sigma));
  const Trajectory<double> tr = simulate(L, x0, c.sigma, dt, horizon);

  std::ostringstream csv;
  write_trajectory_csv(csv, tr);
  if (c.output.empty()) {
    out << csv.str();
    return kExitOk;
  }
  write_file(c.output, csv.str());
  json summary = envelope_json(norm_envelope(tr));
  summary["steps"] = tr.steps();
  summary["dt"] = dt;
  summary["T"] = tr.times[tr.steps() - 1];
  summary["sigma"] = c.sigma;
  const Eigen::VectorXd xf = tr.final_state();
  summary["final_state"] = std::vector<double>(xf.data(), xf.data() + xf.size());
  try {
    const auto pred = consensus_value(L, x0);
    if (!pred.spanning_tree) err << "warning: no directed spanning tree; consensus value is best-effort\n";
    summary["consensus_value"] = pred.consensus_value;
  } catch (const std::domain_error& e) {
    err << "warning: " << e.what() << "\n";
    summary["consensus_value"] = nullptr;
  }
  out << summary.dump(2) << "\n";
  return kExitOk;
}

int compare_cmd(const RunConfig& c, std::ostream& out, std::ostream& err) {
  const DirectedGraph g = load_input(c);
  const Eigen::MatrixXd L = laplacian(g);
  Eigen::MatrixXd L_star;
  if (!c.against.empty()) {
    DirectedGraph h;
    try {
      h = read_graph(c.against);
    } catch (const GraphError& e) {
      throw UsageError(e.what());
    }
    L_star = laplacian(h);
  } else {
    const auto result = solve_weight_perturbation(L);
    if (const auto* bad = std::get_if<Infeasible>(&result)) throw DomainFailure(bad->reason);
    L_star = std::get<WeightPerturbation>(result).L_star;
  }
  if (L_star.rows() != L.rows()) throw UsageError("compared graphs differ in node count");
  const Eigen::VectorXd x0 = initial_state(c, g.size());
  if (!(c.sigma > 0.0)) throw UsageError("--sigma must be positive");
  const double dt = c.dt.value_or(std::min(default_step(L, c.sigma), default_step(L_star, c.sigma)));
  const double horizon = c.horizon.value_or(std::max(default_horizon(L, c.sigma), default_horizon(L_star, c.sigma)));
  const TrajectoryComparison cmp = compare_trajectories(L, L_star, x0, c.sigma, dt, horizon);

  std::ostringstream csv;
  write_comparison_csv(csv, cmp);
  if (c.output.empty()) {
    out << csv.str();
    return kExitOk;
  }
  write_file(c.output, csv.str());
  json summary = {{"original", envelope_json(cmp.original_envelope)},
                  {"optimized", envelope_json(cmp.optimized_envelope)},
                  {"steps", cmp.original.steps()},
                  {"dt", dt},
                  {"initial_norm", x0.norm()}};
  summary["original"]["consensus_value"] = cmp.original_consensus;
  summary["optimized"]["consensus_value"] = cmp.optimized_consensus;
  summary["L_star"] = matrix_to_json(L_star);
  out << summary.dump(2) << "\n";
  (void)err;
  return kExitOk;
}

int sweep_cmd(const RunConfig& c, std::ostream& out, std::ostream&) {
  const std::vector<int> ns = c.ns.empty() ? std::vector<int>{8, 12, 16} : c.ns;
  std::vector<double> ps;
  try {
    ps = c.ps.empty() ? probability_grid(c.p_step) : c.ps;
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  if (c.samples < 1) throw UsageError("--samples must be at least 1");
  std::vector<SweepRecord> records;
  try {
    records = sweep_structural_reactivity(ns, ps, c.samples, c.seed, jobs_from(c));
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  std::ostringstream csv;
  write_sweep_csv(csv, records);
  if (c.output.empty()) out << csv.str();
  else write_file(c.output, csv.str());
  return kExitOk;
}

int generate_cmd(const RunConfig& c, std::ostream& out, std::ostream&) {
  const int n = c.ns.empty() ? 10 : c.ns.front();
  if (n < 1) throw UsageError("--n must be positive");
  if (!(c.p >= 0.0 && c.p <= 1.0)) throw UsageError("--p must lie in [0, 1]");
  const DirectedGraph g = erdos_renyi(n, c.p, c.seed);
  std::string text;
  if (c.format == "json") text = graph_to_json(g).dump(2) + "\n";
  else if (c.format == "edges") text = format_edge_list(g);
  else throw UsageError("--format must be edges or json");
  if (c.output.empty()) out << text;
  else write_file(c.output, text);
  return kExitOk;
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  try {
    if (c.command == "analyze") return analyze(c, out, err);
    if (c.command == "balance-weights") return balance_weights(c, out, err);
    if (c.command == "balance-links") return balance_links(c, out, err);
    if (c.command == "simulate") return simulate_cmd(c, out, err);
    if (c.command == "compare") return compare_cmd(c, out, err);
    if (c.command == "sweep") return sweep_cmd(c, out, err);
    if (c.command == "generate") return generate_cmd(c, out, err);
    err << "error: unknown command '" << c.command << "'\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const GraphError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const DomainFailure& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::domain_error& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitDomain;
  }
}

int main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Reactivity analysis and minimal-reactivity balancing of directed consensus networks", "minreact"};
  app.require_subcommand(1);
  RunConfig c;

  auto add_input = [&](CLI::App* sub) { sub->add_option("-i,--input,input", c.input, "Graph file (edge list or JSON)"); };
  auto add_output = [&](CLI::App* sub, const char* what) { sub->add_option("-o,--out", c.output, what); };
  auto add_dynamics = [&](CLI::App* sub) {
    sub->add_option("--x0", c.x0, "Initial state, comma separated (default: standard normal from --seed)");
    sub->add_option("--x0-file", c.x0_file, "File with the initial state");
    sub->add_option("--sigma", c.sigma, "Coupling strength")->capture_default_str();
    sub->add_option("--dt", c.dt, "RK4 step (default 0.01/(sigma*max|L_ii|))");
    sub->add_option("--T", c.horizon, "Horizon (default 10/(sigma*max(|Re lambda_2|, 0.1)))");
    sub->add_option("--seed", c.seed, "Seed for a random x0")->capture_default_str();
  };

  auto* analyze = app.add_subcommand("analyze", "Reactivity, balance and connectivity report (JSON)");
  add_input(analyze);
  add_output(analyze, "Also write the report here");
  analyze->add_option("--x0", c.x0, "Initial state for the consensus value");
  analyze->add_option("--x0-file", c.x0_file, "File with the initial state");

  auto* bw = app.add_subcommand("balance-weights", "Minimum-norm weight perturbation to a balanced network");
  add_input(bw);
  add_output(bw, "Also write the report here");
  bw->add_option("--epsilon", c.epsilon, "Sign margin, 'auto' = 1e-3 * smallest arc weight")->capture_default_str();

  auto* bl = app.add_subcommand("balance-links", "Minimum link additions/removals to a balanced network");
  add_input(bl);
  add_output(bl, "Also write the report here");
  bl->add_option("--mode", c.mode, "add | remove | both")->capture_default_str();
  bl->add_flag("--prefer-add", c.prefer_add, "Among optimal solutions prefer additions (mode both)");
  bl->add_option("--bias", c.bias, "Tie-break weight in (0, 1/n^2), default 0.5/n^2");

  auto* sim = app.add_subcommand("simulate", "Integrate dX/dt = sigma L X and write the trajectory CSV");
  add_input(sim);
  add_output(sim, "CSV path; a JSON summary then goes to stdout");
  add_dynamics(sim);

  auto* cmp = app.add_subcommand("compare", "Norm trajectories of a graph and its balanced counterpart");
  add_input(cmp);
  cmp->add_option("--against", c.against, "Second graph (default: weight-balanced input)");
  add_output(cmp, "CSV path; a JSON summary then goes to stdout");
  add_dynamics(cmp);

  auto* sw = app.add_subcommand("sweep", "Structural reactivity versus p over Erdos-Renyi digraphs (CSV)");
  sw->add_option("--n", c.ns, "Node counts (default 8 12 16)")->delimiter(',');
  sw->add_option("--p-step", c.p_step, "Grid step on [0, 1]")->capture_default_str();
  sw->add_option("--ps", c.ps, "Explicit probabilities, overrides --p-step")->delimiter(',');
  sw->add_option("--samples", c.samples, "Graphs per grid point")->capture_default_str();
  sw->add_option("--seed", c.seed, "Base seed")->capture_default_str();
  sw->add_option("--jobs", c.jobs, "Worker threads (default MINREACT_JOBS or all cores)");
  add_output(sw, "CSV path (default stdout)");

  auto* gen = app.add_subcommand("generate", "Sample an Erdos-Renyi digraph");
  gen->add_option("--n", c.ns, "Node count")->expected(1);
  gen->add_option("--p", c.p, "Connection probability")->capture_default_str();
  gen->add_option("--seed", c.seed, "Seed")->capture_default_str();
  gen->add_option("--format", c.format, "edges | json")->capture_default_str();
  add_output(gen, "Path (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  c.command = app.get_subcommands().front()->get_name();
  return run(c, out, err);
}

}  // namespace minreact::cli
