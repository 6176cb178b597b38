#pragma once

#include <Eigen/Dense>
#include <cmath>

#include "plap/errors.hpp"

namespace plap::detail {

// Minimize sum_i c_i x_i^p subject to A x >= b and x >= 0, via a log-barrier
// interior-point method with damped Newton steps. Requires a strictly
// feasible start. Duality gap target is gap_tol.
struct PowerConeProgram {
  Eigen::VectorXd c;  // positive weights
  double p = 2.0;
  Eigen::MatrixXd A;
  Eigen::VectorXd b;
  double gap_tol = 1e-10;
};

inline Eigen::VectorXd solve_power_cone(const PowerConeProgram& prog,
                                        Eigen::VectorXd x) {
  const int n = static_cast<int>(x.size());
  const int m = static_cast<int>(prog.b.size());
  const int total_constraints = m + n;

  auto objective = [&](const Eigen::VectorXd& v) {
    double val = 0.0;
    for (int i = 0; i < n; ++i) val += prog.c(i) * std::pow(v(i), prog.p);
    return val;
  };
  auto barrier_value = [&](const Eigen::VectorXd& v, double t) {
    Eigen::VectorXd slack = prog.A * v - prog.b;
    if ((slack.array() <= 0.0).any() || (v.array() <= 0.0).any())
      return std::numeric_limits<double>::infinity();
    return t * objective(v) - slack.array().log().sum() -
           v.array().log().sum();
  };

  double t = 1.0;
  while (total_constraints / t > prog.gap_tol) {
    // Newton iterations on the centering problem.
    for (int iter = 0; iter < 80; ++iter) {
      Eigen::VectorXd slack = prog.A * x - prog.b;
      Eigen::VectorXd grad = Eigen::VectorXd::Zero(n);
      Eigen::MatrixXd hess = Eigen::MatrixXd::Zero(n, n);
      for (int i = 0; i < n; ++i) {
        grad(i) = t * prog.c(i) * prog.p * std::pow(x(i), prog.p - 1.0) -
                  1.0 / x(i);
        hess(i, i) = t * prog.c(i) * prog.p * (prog.p - 1.0) *
                         std::pow(x(i), prog.p - 2.0) +
                     1.0 / (x(i) * x(i));
      }
      if (m > 0) {
        Eigen::VectorXd inv_slack = slack.cwiseInverse();
        grad.noalias() -= prog.A.transpose() * inv_slack;
        hess.noalias() += prog.A.transpose() *
                          inv_slack.array().square().matrix().asDiagonal() *
                          prog.A;
      }
      Eigen::VectorXd step = hess.ldlt().solve(-grad);
      double decrement = -grad.dot(step);
      if (!std::isfinite(decrement))
        throw Error(ErrorCode::SolverFailure, "Newton step failed");
      if (decrement / 2.0 < 1e-14) break;

      double base = barrier_value(x, t);
      double alpha = 1.0;
      while (alpha > 1e-16 &&
             barrier_value(x + alpha * step, t) > base + 1e-4 * alpha * -decrement)
        alpha *= 0.5;
      if (alpha <= 1e-16) break;
      x += alpha * step;
    }
    t *= 10.0;
  }
  return x;
}

}  // namespace plap::detail
