#pragma once

#include "minreact/graph.hpp"
#include "minreact/jacobi.hpp"

#include <Eigen/Core>
#include <Eigen/LU>

#include <cmath>
#include <stdexcept>

namespace minreact {

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

template <typename Scalar>
struct ReactivityReport {
  Scalar reactivity{};            // largest eigenvalue of (L + L^T) / 2
  Vector<Scalar> maximizer;       // unit vector attaining it as a Rayleigh quotient
  bool minimally_reactive = false;
  Scalar column_sum_residual{};   // max_j |sum_i L(i, j)|
  Scalar eigen_residual{};        // ||S v - lambda v||
};

template <typename Scalar>
struct ConsensusPrediction {
  Vector<Scalar> left_vector;  // w with w^T L = 0, scaled to sum 1 when possible
  Scalar consensus_value{};
  Scalar weight_sum{};
  int nullity = 0;             // dimension of the left null space; 1 under a spanning tree
  bool spanning_tree = true;
};

/// 1e-9 scaled by the largest entry magnitude (at least 1).
template <typename Derived>
typename Derived::Scalar default_tolerance(const Eigen::MatrixBase<Derived>& l) {
  using Scalar = typename Derived::Scalar;
  Scalar m = l.size() ? l.cwiseAbs().maxCoeff() : Scalar(0);
  return Scalar(1e-9) * (m > Scalar(1) ? m : Scalar(1));
}

template <typename Derived>
typename Derived::Scalar column_sum_residual(const Eigen::MatrixBase<Derived>& l) {
  return l.size() ? l.colwise().sum().cwiseAbs().maxCoeff() : typename Derived::Scalar(0);
}

namespace detail {
template <typename Derived>
void require_square_finite(const Eigen::MatrixBase<Derived>& l, const char* who) {
  if (l.rows() != l.cols() || l.rows() == 0)
    throw std::invalid_argument(std::string(who) + ": Laplacian must be a non-empty square matrix");
  if (!l.allFinite()) throw std::invalid_argument(std::string(who) + ": Laplacian has NaN or Inf entries");
}
}  // namespace detail

/// R(L) = lambda_1((L + L^T) / 2), the initial growth rate of ||X(t)|| maximized over X(0).
template <typename Derived>
ReactivityReport<typename Derived::Scalar> reactivity(const Eigen::MatrixBase<Derived>& l,
                                                      typename Derived::Scalar tol) {
  using Scalar = typename Derived::Scalar;
  detail::require_square_finite(l, "reactivity");
  const Matrix<Scalar> s = (l + l.transpose()) / Scalar(2);
  const auto eig = jacobi_eigen(s);

  ReactivityReport<Scalar> r;
  r.reactivity = eig.values[0];
  r.maximizer = eig.vectors.col(0);
  r.eigen_residual = (s * r.maximizer - r.reactivity * r.maximizer).norm();
  r.column_sum_residual = column_sum_residual(l);
  r.minimally_reactive = r.column_sum_residual <= tol;
  return r;
}

template <typename Derived>
ReactivityReport<typename Derived::Scalar> reactivity(const Eigen::MatrixBase<Derived>& l) {
  return reactivity(l, default_tolerance(l));
}

/// Column-sum criterion: R(L) = 0 exactly when every column of L sums to zero.
template <typename Derived>
bool is_minimally_reactive(const Eigen::MatrixBase<Derived>& l, typename Derived::Scalar tol) {
  detail::require_square_finite(l, "is_minimally_reactive");
  return column_sum_residual(l) <= tol;
}

template <typename Derived>
bool is_minimally_reactive(const Eigen::MatrixBase<Derived>& l) {
  return is_minimally_reactive(l, default_tolerance(l));
}

/// Consensus value x_c = sum_j w_j x0_j / sum_j w_j, w the left null vector of L.
/// Throws std::domain_error when sum_j w_j vanishes. A missing spanning tree is reported
/// through `spanning_tree` / `nullity` and the first null vector is used.
template <typename DerivedL, typename DerivedX>
ConsensusPrediction<typename DerivedL::Scalar> consensus_value(const Eigen::MatrixBase<DerivedL>& l,
                                                               const Eigen::MatrixBase<DerivedX>& x0) {
  using Scalar = typename DerivedL::Scalar;
  detail::require_square_finite(l, "consensus_value");
  if (x0.size() != l.rows()) throw std::invalid_argument("consensus_value: x0 length does not match L");

  ConsensusPrediction<Scalar> out;
  Matrix<Scalar> lt = l.transpose();
  Eigen::FullPivLU<Matrix<Scalar>> lu(lt);
  lu.setThreshold(Scalar(1e-10));
  Matrix<Scalar> kernel = lu.kernel();
  out.nullity = int(l.rows() - lu.rank());
  if (out.nullity < 1) throw std::domain_error("consensus_value: L has no left null vector");

  Matrix<double> ld = l.template cast<double>();
  out.spanning_tree = has_directed_spanning_tree(graph_from_laplacian(ld));

  Vector<Scalar> w = kernel.col(0);
  const Scalar norm = w.norm();
  const Scalar sum = w.sum();
  if (std::abs(sum) <= Scalar(1e-9) * norm)
    throw std::domain_error("consensus value undefined: left null vector sums to zero");
  w /= sum;
  out.left_vector = w;
  out.weight_sum = w.sum();
  out.consensus_value = w.dot(x0.template cast<Scalar>()) / out.weight_sum;
  return out;
}

}  // namespace minreact
