#include "minreact/experiments.hpp"

#include "minreact/link_ilp.hpp"
#include "minreact/random.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>

namespace minreact {

namespace {

std::string num(double v, int digits = 10) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", digits, v);
  return buf;
}

}  // namespace

std::uint64_t sweep_sample_seed(std::uint64_t base, int n, int p_index, int sample) {
  return derive_seed({base, std::uint64_t(n), std::uint64_t(p_index), std::uint64_t(sample)});
}

std::vector<double> probability_grid(double step) {
  if (!(step > 0.0 && step <= 1.0)) throw std::invalid_argument("probability step must lie in (0, 1]");
  const int count = int(std::llround(1.0 / step));
  if (std::abs(count * step - 1.0) > 1e-9) throw std::invalid_argument("probability step must divide 1");
  std::vector<double> ps;
  for (int k = 0; k <= count; ++k) ps.push_back(double(k) / double(count));
  return ps;
}

std::vector<SweepRecord> sweep_structural_reactivity(const std::vector<int>& ns, const std::vector<double>& ps,
                                                     int samples, std::uint64_t seed, int jobs) {
  if (samples < 1) throw std::invalid_argument("samples must be at least 1");
  for (double p : ps)
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("probabilities must lie in [0, 1]");
  for (int n : ns)
    if (n < 1) throw std::invalid_argument("node counts must be positive");

  const std::size_t points = ns.size() * ps.size();
  const std::size_t tasks = points * std::size_t(samples);
  std::vector<double> psi(tasks, 0.0);

  auto run_task = [&](std::size_t task) {
    const std::size_t point = task / samples;
    const int sample = int(task % samples);
    const int n = ns[point / ps.size()];
    const int p_index = int(point % ps.size());
    const DirectedGraph g = erdos_renyi(n, ps[p_index], sweep_sample_seed(seed, n, p_index, sample));
    psi[task] = structural_reactivity(g);
  };

  const int workers = std::max(1, std::min<int>(jobs, int(tasks)));
  if (workers == 1) {
    for (std::size_t t = 0; t < tasks; ++t) run_task(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t t; (t = next.fetch_add(1)) < tasks;) run_task(t);
      });
    for (auto& th : pool) th.join();
  }

  std::vector<SweepRecord> out;
  for (std::size_t point = 0; point < points; ++point) {
    SweepRecord r;
    r.n = ns[point / ps.size()];
    r.p = ps[point % ps.size()];
    r.samples = samples;
    r.seed = seed;
    double sum = 0.0;
    for (int s = 0; s < samples; ++s) sum += psi[point * samples + s];
    r.psi_mean = sum / samples;
    double var = 0.0;
    for (int s = 0; s < samples; ++s) {
      const double d = psi[point * samples + s] - r.psi_mean;
      var += d * d;
    }
    r.psi_std = std::sqrt(var / samples);
    out.push_back(r);
  }
  return out;
}

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records) {
  os << "n,p,psi_mean,psi_std,samples,seed\n";
  for (const auto& r : records)
    os << r.n << ',' << num(r.p, 6) << ',' << num(r.psi_mean) << ',' << num(r.psi_std) << ',' << r.samples
       << ',' << r.seed << '\n';
}

TrajectoryComparison compare_trajectories(const Eigen::MatrixXd& L, const Eigen::MatrixXd& L_star,
                                          const Eigen::VectorXd& x0, double sigma, double dt, double horizon) {
  if (L.rows() != L_star.rows() || L.cols() != L_star.cols() || x0.size() != L.rows())
    throw std::invalid_argument("compare_trajectories: dimension mismatch");
  TrajectoryComparison c;
  c.original = simulate(L, x0, sigma, dt, horizon);
  c.optimized = simulate(L_star, x0, sigma, dt, horizon);
  c.original_envelope = norm_envelope(c.original);
  c.optimized_envelope = norm_envelope(c.optimized);
  c.original_consensus = consensus_value(L, x0).consensus_value;
  c.optimized_consensus = consensus_value(L_star, x0).consensus_value;
  return c;
}

void write_comparison_csv(std::ostream& os, const TrajectoryComparison& c) {
  os << "t,norm_original,norm_optimized\n";
  for (Eigen::Index k = 0; k < c.original.steps(); ++k)
    os << num(c.original.times[k], 12) << ',' << num(c.original.norms[k], 15) << ','
       << num(c.optimized.norms[k], 15) << '\n';
}

void write_trajectory_csv(std::ostream& os, const Trajectory<double>& tr) {
  const Eigen::Index n = tr.states.rows();
  os << 't';
  for (Eigen::Index i = 0; i < n; ++i) os << ",x_" << i;
  os << ",norm\n";
  for (Eigen::Index k = 0; k < tr.steps(); ++k) {
    os << num(tr.times[k], 12);
    for (Eigen::Index i = 0; i < n; ++i) os << ',' << num(tr.states(i, k), 15);
    os << ',' << num(tr.norms[k], 15) << '\n';
  }
}

}  // namespace minreact
