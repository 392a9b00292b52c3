#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {

struct NewtonOptions {
  double tol = 1e-10;   // infinity norm of the residual
  int max_iter = 100;
  double fd_step = 1e-7;  // relative step for the difference Jacobian
};

/// Damped Newton iteration on F(x) = 0 with a central-difference Jacobian.
/// Throws ConvergenceError carrying the final residual norm on failure.
inline Eigen::VectorXd newton_solve(
    const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
    Eigen::VectorXd x, const NewtonOptions& opt = {}) {
  const auto n = x.size();
  Eigen::VectorXd r = f(x);
  double rnorm = r.lpNorm<Eigen::Infinity>();
  for (int iter = 0; iter < opt.max_iter; ++iter) {
    if (rnorm < opt.tol) return x;
    Eigen::MatrixXd jac(n, n);
    for (Eigen::Index j = 0; j < n; ++j) {
      double h = opt.fd_step * std::max(1.0, std::abs(x[j]));
      Eigen::VectorXd xp = x, xm = x;
      xp[j] += h;
      xm[j] -= h;
      jac.col(j) = (f(xp) - f(xm)) / (2.0 * h);
    }
    Eigen::VectorXd dx = jac.partialPivLu().solve(-r);
    if (!dx.allFinite())
      throw SingularSystemError("newton: singular Jacobian");
    double alpha = 1.0;
    bool accepted = false;
    for (int bt = 0; bt < 12; ++bt) {
      Eigen::VectorXd xt = x + alpha * dx;
      Eigen::VectorXd rt = f(xt);
      double rtnorm = rt.lpNorm<Eigen::Infinity>();
      if (std::isfinite(rtnorm) && rtnorm < rnorm) {
        x = std::move(xt);
        r = std::move(rt);
        rnorm = rtnorm;
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted)
      throw ConvergenceError("newton: no descent step found", rnorm);
  }
  if (rnorm < opt.tol) return x;
  throw ConvergenceError("newton: iteration budget exhausted", rnorm);
}

}  // namespace dynlearn
