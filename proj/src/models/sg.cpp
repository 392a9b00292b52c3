#include "dynlearn/models/sg.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "dynlearn/support/errors.hpp"
#include "dynlearn/support/newton.hpp"

namespace dynlearn {

std::string to_string(ComponentKind kind) {
  return kind == ComponentKind::Sg ? "sg" : "gfm";
}

ComponentKind component_kind_from_string(const std::string& s) {
  if (s == "sg") return ComponentKind::Sg;
  if (s == "gfm") return ComponentKind::Gfm;
  throw ConfigError("unknown component kind: " + s);
}

void SgParams::validate() const {
  if (M <= 0.0) throw std::domain_error("SgParams: M must be positive");
  if (D < 0.0) throw std::domain_error("SgParams: D must be non-negative");
  if (X_d <= 0.0 || X_q <= 0.0 || X_dp <= 0.0 || X_qp <= 0.0)
    throw std::domain_error("SgParams: reactances must be positive");
  if (X_d < X_dp) throw std::domain_error("SgParams: X_d must be >= X_dp");
  if (X_q < X_qp) throw std::domain_error("SgParams: X_q must be >= X_qp");
  if (T_do_p <= 0.0) throw std::domain_error("SgParams: T_do_p must be positive");
  if (T_qo_p < 0.0) throw std::domain_error("SgParams: T_qo_p must be non-negative");
  if (R < 0.0) throw std::domain_error("SgParams: R must be non-negative");
  if (omega_o <= 0.0) throw std::domain_error("SgParams: omega_o must be positive");
}

void ExciterParams::validate() const {
  if (T_A <= 0.0) throw std::domain_error("ExciterParams: T_A must be positive");
  if (K_A <= 0.0) throw std::domain_error("ExciterParams: K_A must be positive");
}

void GovernorParams::validate() const {
  if (T_SV <= 0.0) throw std::domain_error("GovernorParams: T_SV must be positive");
  if (R_D <= 0.0) throw std::domain_error("GovernorParams: R_D must be positive");
}

DqCurrents sg_stator_currents(const SgParams& p, double delta, double e_qp,
                              double e_dp, const TerminalVoltage& y) {
  const double det = p.R * p.R + p.X_d * p.X_q;
  if (det < 1e-12)
    throw SingularSystemError("sg_stator_currents: R^2 + X_d*X_q below 1e-12");
  const double ang = delta - y.theta;
  const double b_d = e_dp - y.v * std::sin(ang);
  const double b_q = e_qp - y.v * std::cos(ang);
  DqCurrents i;
  i.i_d = (p.R * b_d + p.X_q * b_q) / det;
  i.i_q = (p.R * b_q - p.X_d * b_d) / det;
  return i;
}

SgDerivs sg_derivatives(const SgParams& p, const ExciterParams& ex,
                        const GovernorParams& gov, const SgState& s,
                        const TerminalVoltage& y, const Setpoints& u) {
  const bool e_dp_algebraic = (p.T_qo_p == 0.0);
  DqCurrents i;
  double e_dp;
  if (e_dp_algebraic) {
    // e_dp = (X_q - X_qp) * i_q closes the current relation; substitute and
    // solve the modified 2x2 so currents and e_dp stay mutually consistent.
    const double xq_eff = 2.0 * p.X_q - p.X_qp;
    const double det = p.R * p.R + p.X_d * xq_eff;
    if (det < 1e-12)
      throw SingularSystemError("sg_derivatives: degenerate stator relation");
    const double ang = s.delta - y.theta;
    const double b_d = -y.v * std::sin(ang);
    const double b_q = s.e_qp - y.v * std::cos(ang);
    i.i_d = (p.R * b_d + xq_eff * b_q) / det;
    i.i_q = (p.R * b_q - p.X_d * b_d) / det;
    e_dp = (p.X_q - p.X_qp) * i.i_q;
  } else {
    i = sg_stator_currents(p, s.delta, s.e_qp, s.e_dp, y);
    e_dp = s.e_dp;
  }

  const double p_e = e_dp * i.i_d + s.e_qp * i.i_q +
                     (p.X_qp - p.X_dp) * i.i_d * i.i_q;

  SgDerivs d;
  d.value[0] = s.omega - p.omega_o;
  d.value[1] = (s.p_m - p_e - p.D * (s.omega - p.omega_o)) / p.M;
  d.value[2] = (-s.e_qp - (p.X_d - p.X_dp) * i.i_d + s.e_fd) / p.T_do_p;
  if (e_dp_algebraic) {
    d.value[3] = e_dp;
    d.algebraic[3] = true;
  } else {
    d.value[3] = (-s.e_dp + (p.X_q - p.X_qp) * i.i_q) / p.T_qo_p;
  }
  d.value[4] = (-s.e_fd + ex.K_A * (u.aux - y.v)) / ex.T_A;
  d.value[5] = (-s.p_m + u.p_star - (1.0 / gov.R_D) * (s.omega / p.omega_o - 1.0)) /
               gov.T_SV;
  return d;
}

SgState sg_equilibrium(const SgParams& p, const ExciterParams& ex,
                       const GovernorParams& gov, const TerminalVoltage& y,
                       const Setpoints& u, const std::optional<SgState>& guess) {
  auto residual = [&](const Eigen::VectorXd& x) {
    SgState s{x[0], x[1], x[2], x[3], x[4], x[5]};
    SgDerivs d = sg_derivatives(p, ex, gov, s, y, u);
    Eigen::VectorXd r(6);
    for (int k = 0; k < 6; ++k)
      r[k] = d.algebraic[k] ? (x[k] - d.value[k]) : d.value[k];
    return r;
  };
  Eigen::VectorXd x0(6);
  if (guess) {
    x0 << guess->delta, guess->omega, guess->e_qp, guess->e_dp, guess->e_fd,
        guess->p_m;
  } else {
    x0 << y.theta + 0.2, p.omega_o, y.v, 0.05, y.v, u.p_star;
  }
  Eigen::VectorXd x = newton_solve(residual, x0);
  return SgState{x[0], x[1], x[2], x[3], x[4], x[5]};
}

}  // namespace dynlearn
