#include "minreact/qp.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

namespace minreact {

std::string to_string(QpStatus s) {
  switch (s) {
    case QpStatus::Optimal: return "optimal";
    case QpStatus::Infeasible: return "infeasible";
    case QpStatus::IterationLimit: return "iteration limit";
  }
  return "unknown";
}

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Maintains J and R with J^T N_active = [R; 0], J J^T = G^{-1}.
class ActiveFactor {
 public:
  ActiveFactor(Eigen::MatrixXd j) : j_(std::move(j)), r_(j_.rows(), j_.rows()) { r_.setZero(); }

  Eigen::Index active() const { return q_; }

  // z = primal step direction, r = dual step direction for constraint normal np.
  void directions(const Eigen::VectorXd& np, Eigen::VectorXd& d, Eigen::VectorXd& z,
                  Eigen::VectorXd& r) const {
    const Eigen::Index nv = j_.rows();
    d.noalias() = j_.transpose() * np;
    z.noalias() = j_.rightCols(nv - q_) * d.tail(nv - q_);
    r = r_.topLeftCorner(q_, q_).triangularView<Eigen::Upper>().solve(d.head(q_));
  }

  void add(Eigen::VectorXd d) {
    const Eigen::Index nv = j_.rows();
    for (Eigen::Index k = nv - 1; k > q_; --k) {
      if (d[k] == 0.0) continue;
      const double h = std::hypot(d[k - 1], d[k]);
      const double cc = d[k - 1] / h, ss = d[k] / h;
      d[k - 1] = h;
      d[k] = 0.0;
      for (Eigen::Index i = 0; i < nv; ++i) {
        const double a = j_(i, k - 1), b = j_(i, k);
        j_(i, k - 1) = cc * a + ss * b;
        j_(i, k) = -ss * a + cc * b;
      }
    }
    r_.col(q_).head(q_ + 1) = d.head(q_ + 1);
    ++q_;
  }

  void remove(Eigen::Index l) {
    const Eigen::Index nv = j_.rows();
    for (Eigen::Index c = l; c + 1 < q_; ++c) r_.col(c).head(c + 2) = r_.col(c + 1).head(c + 2);
    r_.col(q_ - 1).setZero();
    for (Eigen::Index c = l; c + 1 < q_; ++c) {
      const double a = r_(c, c), b = r_(c + 1, c);
      if (b == 0.0) continue;
      const double h = std::hypot(a, b);
      const double cc = a / h, ss = b / h;
      for (Eigen::Index k = c; k + 1 < q_; ++k) {
        const double x = r_(c, k), y = r_(c + 1, k);
        r_(c, k) = cc * x + ss * y;
        r_(c + 1, k) = -ss * x + cc * y;
      }
      r_(c + 1, c) = 0.0;
      for (Eigen::Index i = 0; i < nv; ++i) {
        const double x = j_(i, c), y = j_(i, c + 1);
        j_(i, c) = cc * x + ss * y;
        j_(i, c + 1) = -ss * x + cc * y;
      }
    }
    --q_;
  }

 private:
  Eigen::MatrixXd j_;
  Eigen::MatrixXd r_;
  Eigen::Index q_ = 0;
};

}  // namespace

QpSolution solve_qp(const Eigen::MatrixXd& G, const Eigen::VectorXd& c, const Eigen::MatrixXd& Aeq,
                    const Eigen::VectorXd& beq, const Eigen::MatrixXd& Ain, const Eigen::VectorXd& bin,
                    const QpSettings& settings) {
  const Eigen::Index nv = G.rows();
  const Eigen::Index neq = Aeq.rows();
  const Eigen::Index nin = Ain.rows();
  if (G.cols() != nv || c.size() != nv || (neq && Aeq.cols() != nv) || beq.size() != neq ||
      (nin && Ain.cols() != nv) || bin.size() != nin)
    throw std::invalid_argument("solve_qp: inconsistent dimensions");

  Eigen::LLT<Eigen::MatrixXd> llt(G);
  if (llt.info() != Eigen::Success) throw std::invalid_argument("solve_qp: G is not positive definite");
  // J = L^{-T}
  Eigen::MatrixXd j = llt.matrixU().solve(Eigen::MatrixXd::Identity(nv, nv));
  ActiveFactor factor(std::move(j));

  // Constraint k in ">=" form: normal(k) . x >= rhs(k); equalities first.
  auto normal = [&](Eigen::Index k) -> Eigen::VectorXd {
    return k < neq ? Eigen::VectorXd(Aeq.row(k).transpose()) : Eigen::VectorXd(-Ain.row(k - neq).transpose());
  };
  auto rhs = [&](Eigen::Index k) { return k < neq ? beq[k] : -bin[k - neq]; };
  std::vector<double> row_norm(neq + nin);
  for (Eigen::Index k = 0; k < neq + nin; ++k)
    row_norm[k] = std::max(1.0, k < neq ? Aeq.row(k).norm() : Ain.row(k - neq).norm());

  QpSolution out;
  out.eq_multipliers = Eigen::VectorXd::Zero(neq);
  out.ineq_multipliers = Eigen::VectorXd::Zero(nin);
  Eigen::VectorXd x = -llt.solve(c);

  std::vector<Eigen::Index> active;  // constraint ids, parallel to u
  std::vector<double> u;
  std::vector<char> is_active(neq + nin, 0);
  Eigen::VectorXd d, z, r;
  const int max_iter = settings.max_iterations > 0 ? settings.max_iterations : int(20 * (nv + neq + nin) + 100);
  int iter = 0;

  auto apply_dual_step = [&](double t) {
    for (std::size_t k = 0; k < u.size(); ++k) u[k] -= t * r[Eigen::Index(k)];
  };
  auto drop = [&](Eigen::Index pos) {
    is_active[active[pos]] = 0;
    factor.remove(pos);
    active.erase(active.begin() + pos);
    u.erase(u.begin() + pos);
  };
  auto finish = [&](QpStatus status) {
    out.status = status;
    out.x = x;
    out.iterations = iter;
    for (std::size_t k = 0; k < active.size(); ++k) {
      if (active[k] < neq) out.eq_multipliers[active[k]] = -u[k];
      else out.ineq_multipliers[active[k] - neq] = u[k];
    }
    out.objective = 0.5 * x.dot(G * x) + c.dot(x);
    Eigen::VectorXd grad = G * x + c;
    if (neq) grad += Aeq.transpose() * out.eq_multipliers;
    if (nin) grad += Ain.transpose() * out.ineq_multipliers;
    out.kkt_residual = grad.size() ? grad.cwiseAbs().maxCoeff() : 0.0;
    double viol = 0.0;
    if (neq) viol = std::max(viol, (Aeq * x - beq).cwiseAbs().maxCoeff());
    if (nin) viol = std::max(viol, (Ain * x - bin).maxCoeff());
    out.max_violation = std::max(viol, 0.0);
    return out;
  };

  // Equalities: always added; their multipliers are never dropped.
  for (Eigen::Index k = 0; k < neq; ++k) {
    ++iter;
    const Eigen::VectorXd np = normal(k);
    factor.directions(np, d, z, r);
    const double s = np.dot(x) - rhs(k);
    const double ztn = z.dot(np);
    if (std::sqrt(std::max(ztn, 0.0)) <= settings.dependence_tol * row_norm[k]) {
      if (std::abs(s) > 1e-8 * row_norm[k] * std::max(1.0, std::abs(rhs(k)))) return finish(QpStatus::Infeasible);
      continue;
    }
    const double t = -s / ztn;
    x += t * z;
    apply_dual_step(t);
    factor.add(d);
    active.push_back(k);
    u.push_back(t);
    is_active[k] = 1;
  }

  while (true) {
    if (++iter > max_iter) return finish(QpStatus::IterationLimit);

    Eigen::Index p = -1;
    double worst = 0.0;
    for (Eigen::Index k = neq; k < neq + nin; ++k) {
      if (is_active[k]) continue;
      const double s = (Ain.row(k - neq).dot(x) - bin[k - neq]) / row_norm[k];
      if (s > settings.feasibility_tol * std::max(1.0, std::abs(bin[k - neq])) && s > worst) {
        worst = s;
        p = k;
      }
    }
    if (p < 0) return finish(QpStatus::Optimal);

    const Eigen::VectorXd np = normal(p);
    double s = np.dot(x) - rhs(p);
    double u_plus = 0.0;
    while (true) {
      if (++iter > max_iter) return finish(QpStatus::IterationLimit);
      factor.directions(np, d, z, r);
      const double ztn = z.dot(np);

      double t1 = kInf;
      Eigen::Index l = -1;
      const double rscale = r.size() ? std::max(1.0, r.cwiseAbs().maxCoeff()) : 1.0;
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (active[k] < neq) continue;
        if (r[Eigen::Index(k)] > 1e-12 * rscale) {
          const double ratio = u[k] / r[Eigen::Index(k)];
          if (ratio < t1) {
            t1 = ratio;
            l = Eigen::Index(k);
          }
        }
      }
      const bool dependent = std::sqrt(std::max(ztn, 0.0)) <= settings.dependence_tol * row_norm[p];
      const double t2 = dependent ? kInf : -s / ztn;
      const double t = std::min(t1, t2);
      if (t == kInf) return finish(QpStatus::Infeasible);

      if (t2 == kInf) {
        apply_dual_step(t);
        u_plus += t;
        drop(l);
        continue;
      }

      x += t * z;
      apply_dual_step(t);
      u_plus += t;
      if (t2 <= t1) {
        factor.add(d);
        active.push_back(p);
        u.push_back(u_plus);
        is_active[p] = 1;
        break;
      }
      drop(l);
      s = np.dot(x) - rhs(p);
    }
  }
}

}  // namespace minreact
