#pragma once

#include "minreact/simulate.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace minreact {

struct SweepRecord {
  int n = 0;
  double p = 0.0;
  int samples = 0;
  double psi_mean = 0.0;
  double psi_std = 0.0;  // population standard deviation
  std::uint64_t seed = 0;
};

/// Seed of sample `sample` at grid point (n, p_index) of a sweep started from `base`.
std::uint64_t sweep_sample_seed(std::uint64_t base, int n, int p_index, int sample);

/// p grid {0, step, 2 step, ..., 1}; the last point is exactly 1.
std::vector<double> probability_grid(double step);

/// psi statistics over `samples` Erdos-Renyi digraphs for every (n, p). Output order is
/// (n, p) as given regardless of `jobs`; results are bit-identical for any job count.
std::vector<SweepRecord> sweep_structural_reactivity(const std::vector<int>& ns, const std::vector<double>& ps,
                                                     int samples, std::uint64_t seed, int jobs = 1);

void write_sweep_csv(std::ostream& os, const std::vector<SweepRecord>& records);

struct TrajectoryComparison {
  Trajectory<double> original;
  Trajectory<double> optimized;
  NormEnvelope<double> original_envelope;
  NormEnvelope<double> optimized_envelope;
  double original_consensus = 0.0;
  double optimized_consensus = 0.0;
};

TrajectoryComparison compare_trajectories(const Eigen::MatrixXd& L, const Eigen::MatrixXd& L_star,
                                          const Eigen::VectorXd& x0, double sigma, double dt, double horizon);

/// `t,norm_original,norm_optimized`
void write_comparison_csv(std::ostream& os, const TrajectoryComparison& c);

/// `t,x_0,...,x_{n-1},norm`
void write_trajectory_csv(std::ostream& os, const Trajectory<double>& tr);

}  // namespace minreact
