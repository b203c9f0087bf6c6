#pragma once

#include <Eigen/Core>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace minreact {

template <typename Scalar>
struct SymmetricEigen {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> values;                // decreasing
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> vectors;  // column k pairs with values[k]
  int sweeps = 0;
};

/// Cyclic Jacobi eigensolver for a real symmetric matrix. Only the upper triangle is read.
/// Sweeps until the off-diagonal Frobenius norm drops below eps * ||A||_F.
template <typename Derived>
SymmetricEigen<typename Derived::Scalar> jacobi_eigen(const Eigen::MatrixBase<Derived>& input,
                                                      int max_sweeps = 100) {
  using Scalar = typename Derived::Scalar;
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (input.rows() != input.cols()) throw std::invalid_argument("jacobi_eigen: matrix must be square");

  const Eigen::Index n = input.rows();
  Mat a = input.template selfadjointView<Eigen::Upper>();
  Mat v = Mat::Identity(n, n);
  const Scalar scale = a.norm();
  const Scalar target = Eigen::NumTraits<Scalar>::epsilon() * (scale > Scalar(0) ? scale : Scalar(1));

  auto off_norm = [&] {
    Scalar s(0);
    for (Eigen::Index j = 1; j < n; ++j)
      for (Eigen::Index i = 0; i < j; ++i) s += a(i, j) * a(i, j);
    return std::sqrt(Scalar(2) * s);
  };

  int sweep = 0;
  for (; sweep < max_sweeps && off_norm() > target; ++sweep) {
    for (Eigen::Index p = 0; p + 1 < n; ++p) {
      for (Eigen::Index q = p + 1; q < n; ++q) {
        const Scalar apq = a(p, q);
        if (apq == Scalar(0)) continue;
        // Rotation annihilating a(p, q); t is the smaller root of t^2 + 2*tau*t - 1 = 0.
        const Scalar tau = (a(q, q) - a(p, p)) / (Scalar(2) * apq);
        const Scalar t = (tau >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                         (std::abs(tau) + std::sqrt(Scalar(1) + tau * tau));
        const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
        const Scalar s = t * c;
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = a(q, p) = Scalar(0);
        for (Eigen::Index k = 0; k < n; ++k) {
          const Scalar vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }
  if (off_norm() > target * Scalar(1e3))
    throw std::runtime_error("jacobi_eigen: no convergence");

  std::vector<Eigen::Index> order(n);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(),
                   [&](Eigen::Index i, Eigen::Index j) { return a(i, i) > a(j, j); });

  SymmetricEigen<Scalar> out;
  out.values.resize(n);
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.col(k) = v.col(order[k]);
  }
  out.sweeps = sweep;
  return out;
}

}  // namespace minreact
