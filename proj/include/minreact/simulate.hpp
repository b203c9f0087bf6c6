#pragma once

#include "minreact/spectral.hpp"

#include <Eigen/Core>
#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace minreact {

/// Sampled solution of dX/dt = sigma * L * X.
template <typename Scalar>
struct Trajectory {
  Vector<Scalar> times;
  Matrix<Scalar> states;  // column k is X(times[k])
  Vector<Scalar> norms;   // ||X(times[k])||_2
  Scalar sigma{1};
  Scalar dt{};

  Eigen::Index steps() const { return times.size(); }
  Vector<Scalar> final_state() const { return states.col(states.cols() - 1); }
};

template <typename Scalar>
struct NormEnvelope {
  Scalar initial_growth_rate{};
  Scalar max_norm{};
  bool monotone = true;
};

inline constexpr double kMaxStepStiffness = 0.1;  // dt * sigma * max|L_ii|
inline constexpr double kMonotoneTolerance = 1e-9;

template <typename Derived>
typename Derived::Scalar max_abs_diagonal(const Eigen::MatrixBase<Derived>& l) {
  return l.size() ? l.diagonal().cwiseAbs().maxCoeff() : typename Derived::Scalar(0);
}

/// Real part of the eigenvalue of L with second-largest real part (0 for a single node).
template <typename Derived>
typename Derived::Scalar second_eigenvalue_real(const Eigen::MatrixBase<Derived>& l) {
  using Scalar = typename Derived::Scalar;
  if (l.rows() < 2) return Scalar(0);
  Eigen::EigenSolver<Matrix<Scalar>> es(l.eval(), false);
  std::vector<Scalar> re(l.rows());
  for (Eigen::Index k = 0; k < l.rows(); ++k) re[k] = es.eigenvalues()[k].real();
  std::sort(re.begin(), re.end(), std::greater<>());
  return re[1];
}

/// dt = 0.01 / (sigma * max|L_ii|), or 0.01 / sigma for an empty graph.
template <typename Derived>
typename Derived::Scalar default_step(const Eigen::MatrixBase<Derived>& l, typename Derived::Scalar sigma) {
  using Scalar = typename Derived::Scalar;
  const Scalar d = max_abs_diagonal(l);
  return Scalar(0.01) / (sigma * (d > Scalar(0) ? d : Scalar(1)));
}

/// T = 10 / (sigma * max(|Re lambda_2|, 0.1)).
template <typename Derived>
typename Derived::Scalar default_horizon(const Eigen::MatrixBase<Derived>& l, typename Derived::Scalar sigma) {
  using Scalar = typename Derived::Scalar;
  const Scalar rate = std::abs(second_eigenvalue_real(l));
  return Scalar(10) / (sigma * std::max(rate, Scalar(0.1)));
}

/// Fixed-step classical RK4 for dX/dt = sigma * L * X from x0 over [0, T].
/// The step count is ceil(T / dt); the last sample may sit slightly past T.
/// Throws std::invalid_argument when dt * sigma * max|L_ii| exceeds 0.1 and
/// std::runtime_error if the state stops being finite.
template <typename DerivedL, typename DerivedX>
Trajectory<typename DerivedL::Scalar> simulate(const Eigen::MatrixBase<DerivedL>& l,
                                               const Eigen::MatrixBase<DerivedX>& x0,
                                               typename DerivedL::Scalar sigma,
                                               typename DerivedL::Scalar dt,
                                               typename DerivedL::Scalar horizon) {
  using Scalar = typename DerivedL::Scalar;
  detail::require_square_finite(l, "simulate");
  if (x0.size() != l.rows()) throw std::invalid_argument("simulate: x0 length does not match L");
  if (!(sigma > Scalar(0))) throw std::invalid_argument("simulate: sigma must be positive");
  if (!(dt > Scalar(0))) throw std::invalid_argument("simulate: dt must be positive");
  if (!(horizon >= Scalar(0))) throw std::invalid_argument("simulate: T must be non-negative");
  const Scalar stiffness = dt * sigma * max_abs_diagonal(l);
  if (stiffness > Scalar(kMaxStepStiffness)) {
    const double suggested = double(kMaxStepStiffness / (sigma * max_abs_diagonal(l)));
    throw std::invalid_argument("simulate: step too large (dt*sigma*max|L_ii| = " +
                                std::to_string(double(stiffness)) + " > 0.1); use dt <= " +
                                std::to_string(suggested));
  }

  const Matrix<Scalar> m = sigma * l;
  const auto steps = Eigen::Index(std::ceil(double(horizon / dt) - 1e-9));
  const Eigen::Index count = std::max<Eigen::Index>(steps, 0) + 1;

  Trajectory<Scalar> tr;
  tr.sigma = sigma;
  tr.dt = dt;
  tr.times.resize(count);
  tr.states.resize(l.rows(), count);
  tr.norms.resize(count);

  Vector<Scalar> x = x0.template cast<Scalar>();
  Vector<Scalar> k1, k2, k3, k4;
  const Scalar half = dt / Scalar(2);
  for (Eigen::Index k = 0; k < count; ++k) {
    if (k > 0) {
      k1.noalias() = m * x;
      k2.noalias() = m * (x + half * k1);
      k3.noalias() = m * (x + half * k2);
      k4.noalias() = m * (x + dt * k3);
      x += (dt / Scalar(6)) * (k1 + Scalar(2) * k2 + Scalar(2) * k3 + k4);
      if (!x.allFinite()) throw std::runtime_error("simulate: state diverged at step " + std::to_string(k));
    }
    tr.times[k] = Scalar(k) * dt;
    tr.states.col(k) = x;
    tr.norms[k] = x.norm();
  }
  return tr;
}

template <typename DerivedL, typename DerivedX>
Trajectory<typename DerivedL::Scalar> simulate(const Eigen::MatrixBase<DerivedL>& l,
                                               const Eigen::MatrixBase<DerivedX>& x0,
                                               typename DerivedL::Scalar sigma = 1) {
  return simulate(l, x0, sigma, default_step(l, sigma), default_horizon(l, sigma));
}

template <typename Scalar>
NormEnvelope<Scalar> norm_envelope(const Trajectory<Scalar>& tr, Scalar tol = Scalar(kMonotoneTolerance)) {
  if (tr.norms.size() == 0) throw std::invalid_argument("norm_envelope: empty trajectory");
  NormEnvelope<Scalar> env;
  env.max_norm = tr.norms.maxCoeff();
  env.initial_growth_rate =
      tr.norms.size() > 1 ? (tr.norms[1] - tr.norms[0]) / (tr.times[1] - tr.times[0]) : Scalar(0);
  for (Eigen::Index k = 1; k < tr.norms.size(); ++k)
    if (tr.norms[k] > tr.norms[k - 1] + tol) {
      env.monotone = false;
      break;
    }
  return env;
}

}  // namespace minreact
