#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "minreact/simulate.hpp"
#include "support/fixtures.hpp"

using namespace minreact;
using namespace minreact::testing;

namespace {

Eigen::VectorXd random_state(Rng& rng, Eigen::Index n) {
  Eigen::VectorXd x(n);
  for (Eigen::Index i = 0; i < n; ++i) x[i] = uniform(rng, -2.0, 2.0);
  return x;
}

double spread(const Eigen::VectorXd& x) { return x.maxCoeff() - x.minCoeff(); }

}  // namespace

TEST_CASE("balanced dyad matches the analytic solution") {
  const Eigen::MatrixXd l = laplacian(dyad());
  Eigen::VectorXd x0(2);
  x0 << 1.0, 0.0;
  auto tr = simulate(l, x0, 1.0, 0.001, 3.0);
  REQUIRE(tr.steps() == 3001);
  CHECK(tr.states.col(0) == x0);
  for (Eigen::Index k = 0; k < tr.steps(); k += 250) {
    const double t = tr.times[k];
    const double gap = std::exp(-2.0 * t);
    CHECK(tr.states(0, k) == doctest::Approx(0.5 + gap / 2).epsilon(1e-10));
    CHECK(tr.states(1, k) == doctest::Approx(0.5 - gap / 2).epsilon(1e-10));
  }
  for (Eigen::Index k = 1; k < tr.steps(); ++k) REQUIRE(tr.norms[k] < tr.norms[k - 1]);
  CHECK(tr.norms[tr.steps() - 1] > 1.0 / std::sqrt(2.0));

  auto env = norm_envelope(tr);
  CHECK(env.monotone);
  CHECK(env.max_norm == 1.0);
  CHECK(env.initial_growth_rate < 0.0);

  auto longer = simulate(l, x0);
  CHECK((longer.final_state() - Eigen::Vector2d(0.5, 0.5)).norm() <= 1e-4);
}

TEST_CASE("default step and horizon") {
  const Eigen::MatrixXd l = five_node_laplacian();
  CHECK(max_abs_diagonal(l) == 10.0);
  CHECK(default_step(l, 1.0) == doctest::Approx(0.001));
  CHECK(default_step(l, 2.0) == doctest::Approx(0.0005));
  CHECK(second_eigenvalue_real(l) == doctest::Approx(-1.25265).epsilon(1e-5));
  CHECK(default_horizon(l, 1.0) == doctest::Approx(10.0 / 1.25265).epsilon(1e-5));
  CHECK(default_horizon(Eigen::MatrixXd::Zero(3, 3), 1.0) == doctest::Approx(100.0));
  CHECK(second_eigenvalue_real(Eigen::MatrixXd::Zero(1, 1)) == 0.0);

  auto tr = simulate(l, five_node_x0());
  CHECK(tr.dt == doctest::Approx(0.001));
  CHECK(tr.times[tr.steps() - 1] >= default_horizon(l, 1.0) - 1e-12);
  CHECK(tr.times[tr.steps() - 1] < default_horizon(l, 1.0) + tr.dt);
}

TEST_CASE("trajectories of the weighted 5-node network") {
  const Eigen::MatrixXd l = five_node_laplacian();
  const Eigen::VectorXd x0 = five_node_x0();
  const double horizon = 20.0 / std::abs(second_eigenvalue_real(l));
  auto tr = simulate(l, x0, 1.0, default_step(l, 1.0), horizon);
  CHECK(tr.states.col(0) == x0);
  const Eigen::VectorXd expected = Eigen::VectorXd::Constant(5, consensus_value(l, x0).consensus_value);
  CHECK((tr.final_state() - expected).cwiseAbs().maxCoeff() <= 1e-6);
  CHECK(std::abs(tr.final_state()[0] - kFiveNodeConsensus) <= 1e-3);
  CHECK(spread(tr.final_state()) <= 1e-6);

  // ||X|| dips for t < 0.01 before rising above ||x0||.
  auto env = norm_envelope(tr);
  CHECK(env.initial_growth_rate < 0.0);
  CHECK(env.max_norm > x0.norm());
  CHECK(env.max_norm == doctest::Approx(2.49360).epsilon(1e-5));
  CHECK_FALSE(env.monotone);
  CHECK(tr.norms[0] == doctest::Approx(2.28088).epsilon(1e-5));

  const Eigen::MatrixXd s = (l + l.transpose()) / 2.0;
  auto tiny = norm_envelope(simulate(l, x0, 1.0, 1e-7, 1e-7));
  CHECK(tiny.initial_growth_rate == doctest::Approx(x0.dot(s * x0) / x0.norm()).epsilon(1e-4));

  const Eigen::MatrixXd lp = five_node_published_optimum();
  auto bal = simulate(lp, x0, 1.0, default_step(lp, 1.0), 20.0 / std::abs(second_eigenvalue_real(lp)));
  CHECK(std::abs(bal.final_state()[0] - kFiveNodeBalancedConsensus) <= 1e-3);
}

TEST_CASE("coupling strength rescales the matrix exactly") {
  Rng rng(61);
  for (int trial = 0; trial < 30; ++trial) {
    const Eigen::MatrixXd l = laplacian(random_rooted_digraph(rng, 2, 10));
    const Eigen::VectorXd x0 = random_state(rng, l.rows());
    const double sigma = uniform(rng, 0.1, 5.0);
    const double dt = default_step(l, sigma);
    const double horizon = 200 * dt;
    auto a = simulate(l, x0, sigma, dt, horizon);
    const Eigen::MatrixXd scaled = sigma * l;
    auto b = simulate(scaled, x0, 1.0, dt, horizon);
    REQUIRE(a.steps() == b.steps());
    REQUIRE(a.states == b.states);
    REQUIRE(a.norms == b.norms);
  }
}

TEST_CASE("balanced networks conserve the mean and never grow the norm") {
  Rng rng(71);
  for (int trial = 0; trial < 100; ++trial) {
    const Eigen::MatrixXd l = laplacian(random_balanced_digraph(rng, 2, 20));
    const Eigen::VectorXd x0 = random_state(rng, l.rows());
    auto tr = simulate(l, x0);
    for (Eigen::Index k = 1; k < tr.steps(); ++k) REQUIRE(tr.norms[k] <= tr.norms[k - 1] + 1e-9);
    for (Eigen::Index k = 0; k < tr.steps(); ++k) REQUIRE(std::abs(tr.states.col(k).mean() - x0.mean()) <= 1e-8);
    REQUIRE(norm_envelope(tr).monotone);
  }
}

TEST_CASE("rooted networks converge to the predicted consensus") {
  Rng rng(81);
  for (int trial = 0; trial < 40; ++trial) {
    const Eigen::MatrixXd l = laplacian(random_rooted_digraph(rng, 2, 8, 0.5, 2.0, 0.3, 0.8));
    const Eigen::VectorXd x0 = random_state(rng, l.rows());
    const double rate = std::abs(second_eigenvalue_real(l));
    if (rate < 0.05) continue;
    auto tr = simulate(l, x0, 1.0, default_step(l, 1.0), 20.0 / rate);
    const double xc = consensus_value(l, x0).consensus_value;
    REQUIRE(spread(tr.final_state()) <= 1e-6);
    REQUIRE((tr.final_state().array() - xc).abs().maxCoeff() <= 1e-6);
  }
}

TEST_CASE("consensus states are fixed points") {
  const Eigen::MatrixXd l = five_node_laplacian();
  const Eigen::VectorXd x0 = Eigen::VectorXd::Constant(5, 0.7);
  auto tr = simulate(l, x0, 1.0, 0.001, 1.0);
  auto env = norm_envelope(tr);
  CHECK(env.monotone);
  CHECK(std::abs(env.initial_growth_rate) <= 1e-12);
  CHECK((tr.final_state() - x0).norm() <= 1e-12);
}

TEST_CASE("simulate validates its inputs") {
  const Eigen::MatrixXd l = five_node_laplacian();
  const Eigen::VectorXd x0 = five_node_x0();
  try {
    simulate(l, x0, 1.0, 0.02, 1.0);
    FAIL("expected the step guard to fire");
  } catch (const std::invalid_argument& e) {
    CHECK(std::string(e.what()).find("use dt <= 0.01") != std::string::npos);
  }
  CHECK_NOTHROW(simulate(l, x0, 1.0, 0.01, 0.1));
  CHECK_THROWS_AS(simulate(l, x0, 2.0, 0.01, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate(l, x0, 0.0, 0.001, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate(l, x0, 1.0, 0.0, 1.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate(l, x0, 1.0, 0.001, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(simulate(l, Eigen::VectorXd::Zero(4), 1.0, 0.001, 1.0), std::invalid_argument);

  auto single = simulate(l, x0, 1.0, 0.001, 0.0);
  CHECK(single.steps() == 1);
  CHECK(norm_envelope(single).initial_growth_rate == 0.0);
  CHECK_THROWS_AS(norm_envelope(Trajectory<double>{}), std::invalid_argument);
}
