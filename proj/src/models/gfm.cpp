#include "dynlearn/models/gfm.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

#include "dynlearn/support/errors.hpp"
#include "dynlearn/support/newton.hpp"

namespace dynlearn {

std::string to_string(GfmStrategy s) {
  switch (s) {
    case GfmStrategy::Droop: return "droop";
    case GfmStrategy::Vsm: return "vsm";
    case GfmStrategy::Dvoc: return "dvoc";
  }
  return "droop";
}

GfmStrategy gfm_strategy_from_string(const std::string& s) {
  if (s == "droop") return GfmStrategy::Droop;
  if (s == "vsm") return GfmStrategy::Vsm;
  if (s == "dvoc") return GfmStrategy::Dvoc;
  throw ConfigError("unknown GFM strategy: " + s);
}

void GfmParams::validate() const {
  if (tau_f < 0.0 || tau_v < 0.0 || tau_p < 0.0)
    throw std::domain_error("GfmParams: time constants must be non-negative");
  if (kappa_f <= 0.0 || kappa_v <= 0.0)
    throw std::domain_error("GfmParams: kappa_f and kappa_v must be positive");
  if (kappa_d < 0.0) throw std::domain_error("GfmParams: kappa_d must be non-negative");
  if (L <= 0.0) throw std::domain_error("GfmParams: L must be positive");
  if (omega_o <= 0.0) throw std::domain_error("GfmParams: omega_o must be positive");
  if (gains.V_o <= 0.0) throw std::domain_error("GfmParams: V_o must be positive");
}

GfmParams gfm_gains_from_strategy(GfmStrategy strategy, const GfmControlGains& g,
                                  double e_star_live, double L) {
  GfmParams p;
  p.strategy = strategy;
  p.gains = g;
  p.L = L;
  p.omega_o = g.omega_o;
  switch (strategy) {
    case GfmStrategy::Droop:
      p.tau_f = 0.0;
      p.tau_v = 0.0;
      p.tau_p = 1.0 / g.omega_c;
      p.kappa_d = 0.0;
      p.kappa_f = 1.0 / g.d_f;
      p.kappa_v = 1.0 / g.d_v;
      break;
    case GfmStrategy::Vsm:
      p.tau_f = g.m_f / g.d_f;
      p.tau_v = 0.0;
      p.tau_p = 1.0 / g.omega_c;
      p.kappa_d = g.d_d / g.d_f;
      p.kappa_f = 1.0 / g.d_f;
      p.kappa_v = 1.0 / g.d_v;
      break;
    case GfmStrategy::Dvoc:
      if (e_star_live <= 0.0)
        throw std::domain_error("gfm_gains_from_strategy: dVOC needs E* > 0");
      p.tau_f = 0.0;
      p.tau_v = 1.0 / (g.omega_o * g.kappa_2);
      p.tau_p = 0.0;
      p.kappa_d = 0.0;
      p.kappa_f = g.omega_o * g.kappa_1 / (e_star_live * e_star_live);
      p.kappa_v = g.kappa_1 / (g.kappa_2 * e_star_live);
      break;
  }
  p.validate();
  return p;
}

GfmParams GfmParams::refreshed(double e_star_live) const {
  if (strategy != GfmStrategy::Dvoc) return *this;
  return gfm_gains_from_strategy(strategy, gains, e_star_live, L);
}

double fv_eval(GfmStrategy strategy, double e_star, double V_o) {
  if (strategy == GfmStrategy::Dvoc)
    return e_star * (V_o * V_o - e_star * e_star);
  return V_o - e_star;
}

GfmState gfm_resolve(const GfmParams& p0, GfmState s, const TerminalVoltage& y,
                     const Setpoints& u) {
  const GfmParams p = p0.refreshed(s.e_star);
  if (p.tau_p == 0.0) {
    s.p_m = 1.5 * y.v * s.i_d;
    s.q_m = -1.5 * y.v * s.i_q;
  }
  if (p.tau_f == 0.0)
    s.omega = p.omega_o + p.kappa_f * (u.p_star - s.p_m) / (p.kappa_d + 1.0);
  if (p.tau_v == 0.0) {
    // Only the linear droop/VSM law has a zero tau_v; invert it directly.
    s.e_star = p.gains.V_o + p.kappa_v * (u.aux - s.q_m);
  }
  return s;
}

GfmDerivs gfm_derivatives(const GfmParams& p0, const GfmState& s0,
                          const TerminalVoltage& y, const Setpoints& u) {
  const GfmState s = gfm_resolve(p0, s0, y, u);
  const GfmParams p = p0.refreshed(s.e_star);
  const double ang = s.delta - y.theta;

  GfmDerivs d;
  d.value[0] = s.omega - p.omega_o;
  if (p.tau_f == 0.0) {
    d.value[1] = s.omega;
    d.algebraic[1] = true;
  } else {
    d.value[1] = ((p.kappa_d + 1.0) * (p.omega_o - s.omega) +
                  p.kappa_f * (u.p_star - s.p_m)) / p.tau_f;
  }
  if (p.tau_v == 0.0) {
    d.value[2] = s.e_star;
    d.algebraic[2] = true;
  } else {
    d.value[2] = (fv_eval(p.strategy, s.e_star, p.gains.V_o) +
                  p.kappa_v * (u.aux - s.q_m)) / p.tau_v;
  }
  if (p.tau_p == 0.0) {
    d.value[3] = s.p_m;
    d.value[4] = s.q_m;
    d.algebraic[3] = true;
    d.algebraic[4] = true;
  } else {
    d.value[3] = (1.5 * y.v * s.i_d - s.p_m) / p.tau_p;
    d.value[4] = (-1.5 * y.v * s.i_q - s.q_m) / p.tau_p;
  }
  d.value[5] = (s.e_star * std::cos(ang) - y.v + p.omega_o * p.L * s.i_q) / p.L;
  d.value[6] = (s.e_star * std::sin(ang) - p.omega_o * p.L * s.i_d) / p.L;
  return d;
}

GfmState gfm_equilibrium(const GfmParams& p, const TerminalVoltage& y,
                         const Setpoints& u, const std::optional<GfmState>& guess) {
  auto residual = [&](const Eigen::VectorXd& x) {
    GfmState s{x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
    GfmDerivs d = gfm_derivatives(p, s, y, u);
    Eigen::VectorXd r(7);
    for (int k = 0; k < 7; ++k)
      r[k] = d.algebraic[k] ? (x[k] - d.value[k]) : d.value[k];
    return r;
  };
  Eigen::VectorXd x0(7);
  if (guess) {
    x0 << guess->delta, guess->omega, guess->e_star, guess->p_m, guess->q_m,
        guess->i_d, guess->i_q;
  } else {
    const double e0 = std::max(y.v, 0.9 * p.gains.V_o);
    const double xc = p.omega_o * p.L;
    x0 << y.theta + 0.05, p.omega_o, e0, u.p_star, u.aux,
        u.p_star / std::max(1.0, 1.5 * y.v), (y.v - e0) / xc;
  }
  Eigen::VectorXd x = newton_solve(residual, x0);
  GfmState s{x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
  return gfm_resolve(p, s, y, u);
}

}  // namespace dynlearn
