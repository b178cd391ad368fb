#include <algorithm>
#include <cmath>
#include <type_traits>
#include <variant>

#include <Eigen/Dense>

#include "chebyshev_solver.hpp"

namespace greedylab::detail {

namespace {

// Epigraph form over z = (u, t) with u the residual on the free positions:
//   minimise t  s.t.  t^2 >= c0 + |u|^2,  |s_k + w_k . u| <= t  (k = 1..n)
// where c0 and s_k collect the fixed coordinates. Barrier:
//   tau * t - log(t^2 - c0 - |u|^2) - sum_k log(t - s_k - w_k.u) + log(t + s_k + w_k.u)
class KtBarrier {
 public:
  KtBarrier(std::span<const double> x, const std::vector<std::size_t>& free)
      : n_(x.size()), b_(free.size()), w_(static_cast<Eigen::Index>(n_), static_cast<Eigen::Index>(b_)), s_(n_) {
    std::vector<bool> is_free(n_, false);
    for (auto p : free) is_free[p] = true;
    double partial = 0.0;
    w_.setZero();
    for (std::size_t k = 0; k < n_; ++k) {
      const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(k + 1));
      if (!is_free[k]) {
        c0_ += x[k] * x[k];
        partial += x[k] * inv_sqrt;
      }
      s_[k] = partial;
    }
    for (std::size_t i = 0; i < b_; ++i) {
      const double inv_sqrt = 1.0 / std::sqrt(static_cast<double>(free[i] + 1));
      for (std::size_t k = free[i]; k < n_; ++k) w_(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(i)) = inv_sqrt;
    }
  }

  double c0() const { return c0_; }
  std::size_t dim() const { return b_ + 1; }
  double barrier_parameter() const { return 2.0 + 2.0 * static_cast<double>(n_); }

  /// max(sqrt(c0 + |u|^2), max_k |s_k + w_k.u|)
  double objective(const Eigen::VectorXd& u) const {
    const Eigen::VectorXd lin = w_ * u;
    double best = std::sqrt(c0_ + u.squaredNorm());
    for (std::size_t k = 0; k < n_; ++k) best = std::max(best, std::abs(s_[k] + lin(static_cast<Eigen::Index>(k))));
    return best;
  }

  bool feasible(const Eigen::VectorXd& z) const {
    const auto u = z.head(static_cast<Eigen::Index>(b_));
    const double t = z(static_cast<Eigen::Index>(b_));
    if (!(t > 0.0) || !(t * t - c0_ - u.squaredNorm() > 0.0)) return false;
    const Eigen::VectorXd lin = w_ * u;
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = s_[k] + lin(static_cast<Eigen::Index>(k));
      if (!(t - a > 0.0) || !(t + a > 0.0)) return false;
    }
    return true;
  }

  double value(const Eigen::VectorXd& z, double tau) const {
    const auto u = z.head(static_cast<Eigen::Index>(b_));
    const double t = z(static_cast<Eigen::Index>(b_));
    const Eigen::VectorXd lin = w_ * u;
    double v = tau * t - std::log(t * t - c0_ - u.squaredNorm());
    for (std::size_t k = 0; k < n_; ++k) {
      const double a = s_[k] + lin(static_cast<Eigen::Index>(k));
      v -= std::log(t - a) + std::log(t + a);
    }
    return v;
  }

  void derivatives(const Eigen::VectorXd& z, double tau, Eigen::VectorXd& g, Eigen::MatrixXd& h) const {
    const auto bi = static_cast<Eigen::Index>(b_);
    const auto u = z.head(bi);
    const double t = z(bi);
    g.setZero(bi + 1);
    h.setZero(bi + 1, bi + 1);
    g(bi) = tau;

    const double q = t * t - c0_ - u.squaredNorm();
    Eigen::VectorXd dq(bi + 1);
    dq.head(bi) = -2.0 * u;
    dq(bi) = 2.0 * t;
    g -= dq / q;
    h += dq * dq.transpose() / (q * q);
    h.topLeftCorner(bi, bi).diagonal().array() += 2.0 / q;
    h(bi, bi) -= 2.0 / q;

    const Eigen::VectorXd lin = w_ * u;
    Eigen::VectorXd d(bi + 1);
    for (std::size_t k = 0; k < n_; ++k) {
      const auto kk = static_cast<Eigen::Index>(k);
      const double a = s_[k] + lin(kk);
      // t - a
      d.head(bi) = -w_.row(kk).transpose();
      d(bi) = 1.0;
      double l = t - a;
      g -= d / l;
      h += d * d.transpose() / (l * l);
      // t + a
      d.head(bi) = w_.row(kk).transpose();
      l = t + a;
      g -= d / l;
      h += d * d.transpose() / (l * l);
    }
  }

 private:
  std::size_t n_;
  std::size_t b_;
  Eigen::MatrixXd w_;
  std::vector<double> s_;
  double c0_ = 0.0;
};

}  // namespace

CoefficientSolve solve_kt(std::span<const double> x, const std::vector<std::size_t>& positions, double tol) {
  CoefficientSolve out;
  out.coefficients.resize(positions.size());
  for (std::size_t i = 0; i < positions.size(); ++i) out.coefficients[i] = x[positions[i]];
  if (positions.empty()) return out;

  KtBarrier barrier(x, positions);
  if (barrier.c0() == 0.0) return out;  // x vanishes off A: the projection is exact

  const auto b = static_cast<Eigen::Index>(positions.size());
  Eigen::VectorXd z = Eigen::VectorXd::Zero(b + 1);
  const double start = barrier.objective(z.head(b));
  z(b) = 1.5 * start;

  const double nu = barrier.barrier_parameter();
  const double target_gap = 0.5 * tol * std::sqrt(barrier.c0());  // F* >= sqrt(c0)
  double tau = nu / start;

  Eigen::VectorXd g;
  Eigen::MatrixXd h;
  Eigen::VectorXd best_u = z.head(b);
  double best_obj = start;

  while (out.iterations < kMaxNewtonIterations) {
    for (int inner = 0; inner < 100 && out.iterations < kMaxNewtonIterations; ++inner) {
      barrier.derivatives(z, tau, g, h);
      const Eigen::VectorXd step = -h.ldlt().solve(g);
      const double decrement = -g.dot(step);
      ++out.iterations;
      if (!(decrement > 1e-9)) break;
      double s = 1.0;
      const double phi = barrier.value(z, tau);
      int halvings = 0;
      while (halvings < 80 && !barrier.feasible(z + s * step)) {
        s *= 0.5;
        ++halvings;
      }
      while (halvings < 80 && barrier.value(z + s * step, tau) > phi - 0.25 * s * decrement) {
        s *= 0.5;
        ++halvings;
      }
      if (halvings >= 80) break;
      z += s * step;
      if (decrement < 1e-7) break;
    }
    const double obj = barrier.objective(z.head(b));
    if (obj < best_obj) {
      best_obj = obj;
      best_u = z.head(b);
    }
    if (nu / tau <= target_gap) break;
    tau *= 40.0;
  }

  for (std::size_t i = 0; i < positions.size(); ++i)
    out.coefficients[i] = x[positions[i]] - best_u(static_cast<Eigen::Index>(i));
  return out;
}

CoefficientSolve solve_coefficients(const SpaceSpec& space, std::span<const double> x,
                                    const std::vector<std::size_t>& positions, double tol) {
  return std::visit(
      [&](const auto& k) -> CoefficientSolve {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, KtSumming>) {
          return solve_kt(x, positions, tol);
        } else if constexpr (std::is_same_v<T, DirectSumMax>) {
          // The two factors share no coordinates, so the max of norms is
          // minimised by minimising each factor independently.
          std::vector<double> left, right;
          split_interleaved(x, left, right);
          std::vector<std::size_t> lp, rp;
          for (auto p : positions) (p % 2 == 0 ? lp : rp).push_back(p / 2);
          auto ls = solve_coefficients(*k.left, left, lp, tol);
          auto rs = solve_coefficients(*k.right, right, rp, tol);
          CoefficientSolve out;
          out.iterations = ls.iterations + rs.iterations;
          std::size_t li = 0, ri = 0;
          for (auto p : positions)
            out.coefficients.push_back(p % 2 == 0 ? ls.coefficients[li++] : rs.coefficients[ri++]);
          return out;
        } else {
          CoefficientSolve out;
          for (auto p : positions) out.coefficients.push_back(x[p]);
          return out;
        }
      },
      space.kind());
}

}  // namespace greedylab::detail
