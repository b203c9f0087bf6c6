#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "minreact/experiments.hpp"
#include "minreact/link_ilp.hpp"
#include "support/fixtures.hpp"

#include <set>
#include <sstream>

using namespace minreact;
using namespace minreact::testing;

TEST_CASE("probability grid") {
  auto g = probability_grid(0.05);
  REQUIRE(g.size() == 21);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 1.0);
  CHECK(g[10] == 0.5);
  for (std::size_t k = 0; k < g.size(); ++k) CHECK(g[k] == doctest::Approx(0.05 * double(k)));
  CHECK(probability_grid(0.1).size() == 11);
  CHECK(probability_grid(1.0) == std::vector<double>{0.0, 1.0});
  CHECK_THROWS_AS(probability_grid(0.0), std::invalid_argument);
}

TEST_CASE("sample seeds are distinct and stable") {
  std::set<std::uint64_t> seen;
  for (int n : {8, 12})
    for (int p = 0; p < 21; ++p)
      for (int s = 0; s < 50; ++s) seen.insert(sweep_sample_seed(7, n, p, s));
  CHECK(seen.size() == 2 * 21 * 50);
  CHECK(sweep_sample_seed(7, 8, 3, 4) == sweep_sample_seed(7, 8, 3, 4));
  CHECK(sweep_sample_seed(7, 8, 3, 4) != sweep_sample_seed(8, 8, 3, 4));
}

TEST_CASE("sweep endpoints are exactly zero") {
  auto recs = sweep_structural_reactivity({5, 9}, {0.0, 1.0}, 10, 3, 1);
  REQUIRE(recs.size() == 4);
  for (const auto& r : recs) {
    CHECK(r.psi_mean == 0.0);
    CHECK(r.psi_std == 0.0);
    CHECK(r.samples == 10);
    CHECK(r.seed == 3);
  }
  CHECK(recs[0].n == 5);
  CHECK(recs[1].p == 1.0);
  CHECK(recs[2].n == 9);
}

TEST_CASE("sweep statistics match a direct recomputation") {
  const std::vector<double> ps = {0.3, 0.5};
  auto recs = sweep_structural_reactivity({6}, ps, 12, 42, 1);
  for (std::size_t pi = 0; pi < ps.size(); ++pi) {
    std::vector<double> psi;
    for (int s = 0; s < 12; ++s)
      psi.push_back(structural_reactivity(erdos_renyi(6, ps[pi], sweep_sample_seed(42, 6, int(pi), s))));
    double mean = 0, var = 0;
    for (double v : psi) mean += v;
    mean /= psi.size();
    for (double v : psi) var += (v - mean) * (v - mean);
    var /= psi.size();
    CHECK(recs[pi].psi_mean == doctest::Approx(mean).epsilon(1e-14));
    CHECK(recs[pi].psi_std == doctest::Approx(std::sqrt(var)).epsilon(1e-12));
    CHECK(recs[pi].psi_mean > 0.0);
  }
}

TEST_CASE("sweep output is identical for any job count") {
  const auto ps = probability_grid(0.25);
  std::ostringstream a, b, c;
  write_sweep_csv(a, sweep_structural_reactivity({6, 8}, ps, 8, 11, 1));
  write_sweep_csv(b, sweep_structural_reactivity({6, 8}, ps, 8, 11, 4));
  write_sweep_csv(c, sweep_structural_reactivity({6, 8}, ps, 8, 11, 3));
  CHECK(a.str() == b.str());
  CHECK(a.str() == c.str());
  CHECK(a.str().rfind("n,p,psi_mean,psi_std,samples,seed\n", 0) == 0);
  const std::string text = a.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 1 + 2 * 5);

  std::ostringstream d;
  write_sweep_csv(d, sweep_structural_reactivity({6, 8}, ps, 8, 12, 1));
  CHECK(a.str() != d.str());
}

TEST_CASE("sweep rejects bad arguments") {
  CHECK_THROWS_AS(sweep_structural_reactivity({5}, {1.5}, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(sweep_structural_reactivity({5}, {0.5}, 0, 0), std::invalid_argument);
}

TEST_CASE("trajectory comparison") {
  const Eigen::MatrixXd l = five_node_laplacian();
  const Eigen::MatrixXd ls = five_node_published_optimum();
  const Eigen::VectorXd x0 = five_node_x0();
  auto c = compare_trajectories(l, ls, x0, 1.0, 0.001, 3.0);
  CHECK(c.original.steps() == c.optimized.steps());
  CHECK(c.original_envelope.max_norm > x0.norm());
  CHECK_FALSE(c.original_envelope.monotone);
  CHECK(c.optimized_envelope.monotone);
  CHECK(std::abs(c.original_consensus - kFiveNodeConsensus) <= 1e-3);
  CHECK(std::abs(c.optimized_consensus - kFiveNodeBalancedConsensus) <= 1e-3);

  auto same = compare_trajectories(l, l, x0, 1.0, 0.001, 1.0);
  CHECK(same.original.norms == same.optimized.norms);

  auto flat = compare_trajectories(l, ls, Eigen::VectorXd::Constant(5, -0.3), 1.0, 0.001, 1.0);
  CHECK(flat.original_envelope.monotone);
  CHECK(flat.optimized_envelope.monotone);
  CHECK((flat.original.norms.array() - flat.original.norms[0]).abs().maxCoeff() <= 1e-12);

  CHECK_THROWS_AS(compare_trajectories(l, Eigen::MatrixXd::Zero(4, 4), x0, 1.0, 0.001, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(compare_trajectories(l, ls, Eigen::VectorXd::Zero(4), 1.0, 0.001, 1.0), std::invalid_argument);

  std::ostringstream csv;
  write_comparison_csv(csv, compare_trajectories(l, ls, x0, 1.0, 0.001, 0.002));
  std::istringstream lines(csv.str());
  std::string header, row;
  std::getline(lines, header);
  CHECK(header == "t,norm_original,norm_optimized");
  int rows = 0;
  while (std::getline(lines, row)) ++rows;
  CHECK(rows == 3);
}

TEST_CASE("trajectory CSV layout") {
  const Eigen::MatrixXd l = laplacian(dyad());
  auto tr = simulate(l, Eigen::Vector2d(1, 0), 1.0, 0.01, 0.02);
  std::ostringstream os;
  write_trajectory_csv(os, tr);
  std::istringstream lines(os.str());
  std::string header, first;
  std::getline(lines, header);
  std::getline(lines, first);
  CHECK(header == "t,x_0,x_1,norm");
  CHECK(first == "0,1,0,1");
}
