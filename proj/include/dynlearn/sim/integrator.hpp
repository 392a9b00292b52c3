#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "dynlearn/models/types.hpp"

namespace dynlearn {

enum class IntegrationMethod { Euler, Rk4 };

IntegrationMethod integration_method_from_string(const std::string& s);

struct StepConfig {
  double dt = 0.0;
  IntegrationMethod method = IntegrationMethod::Rk4;
};

/// Four-stage explicit Runge-Kutta coefficients: stage weights c, stage
/// abscissae alpha, and the strictly lower stage coupling beta.
struct Rk4Tableau {
  std::array<double, 4> c{};
  std::array<double, 4> alpha{};
  std::array<std::array<double, 4>, 4> beta{};

  static Rk4Tableau classic() {
    Rk4Tableau t;
    t.c = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    t.alpha = {0.0, 0.5, 0.5, 1.0};
    t.beta[1][0] = 0.5;
    t.beta[2][1] = 0.5;
    t.beta[3][2] = 1.0;
    return t;
  }

  void validate() const {
    double sum = 0.0;
    for (double w : c) sum += w;
    if (std::abs(sum - 1.0) > 1e-12)
      throw std::domain_error("Rk4Tableau: stage weights must sum to 1");
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = i; j < 4; ++j)
        if (beta[i][j] != 0.0)
          throw std::domain_error("Rk4Tableau: beta must be strictly lower");
  }
};

/// One forward Euler step; terminal conditions and set-points are held.
template <class F>
Eigen::VectorXd step_euler(F&& f, const Eigen::VectorXd& x,
                           const TerminalVoltage& y, const Setpoints& u,
                           double dt) {
  return x + dt * f(x, y, u);
}

/// One explicit Runge-Kutta step with terminal conditions and set-points
/// held across all four stage evaluations.
template <class F>
Eigen::VectorXd step_rk4(F&& f, const Eigen::VectorXd& x,
                         const TerminalVoltage& y, const Setpoints& u,
                         double dt, const Rk4Tableau& tb = Rk4Tableau::classic()) {
  std::array<Eigen::VectorXd, 4> k;
  for (std::size_t i = 0; i < 4; ++i) {
    Eigen::VectorXd xi = x;
    for (std::size_t j = 0; j < i; ++j)
      if (tb.beta[i][j] != 0.0) xi += dt * tb.beta[i][j] * k[j];
    k[i] = f(xi, y, u);
  }
  Eigen::VectorXd out = x;
  for (std::size_t i = 0; i < 4; ++i) out += dt * tb.c[i] * k[i];
  return out;
}

template <class F>
Eigen::VectorXd step_once(IntegrationMethod m, F&& f, const Eigen::VectorXd& x,
                          const TerminalVoltage& y, const Setpoints& u, double dt) {
  if (m == IntegrationMethod::Euler) return step_euler(f, x, y, u, dt);
  return step_rk4(f, x, y, u, dt);
}

}  // namespace dynlearn
