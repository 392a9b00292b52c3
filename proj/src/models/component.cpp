#include "dynlearn/models/component.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {

namespace {

SgState sg_from_vec(const Eigen::VectorXd& x) {
  return SgState{x[0], x[1], x[2], x[3], x[4], x[5]};
}

GfmState gfm_from_vec(const Eigen::VectorXd& x) {
  return GfmState{x[0], x[1], x[2], x[3], x[4], x[5], x[6]};
}

}  // namespace

ReducedState reduce_state(ComponentKind kind, const Eigen::VectorXd& full) {
  ReducedState r;
  r.delta = full[0];
  r.omega = full[1];
  r.e = kind == ComponentKind::Sg ? std::hypot(full[3], full[2]) : full[2];
  return r;
}

ComponentModel ComponentModel::sg(const SgParams& p, const ExciterParams& ex,
                                  const GovernorParams& gov) {
  p.validate();
  ex.validate();
  gov.validate();
  ComponentModel m;
  m.kind_ = ComponentKind::Sg;
  m.sg_ = p;
  m.ex_ = ex;
  m.gov_ = gov;
  m.rebuild_mask();
  return m;
}

ComponentModel ComponentModel::gfm(const GfmParams& p) {
  p.validate();
  ComponentModel m;
  m.kind_ = ComponentKind::Gfm;
  m.gfm_ = p;
  m.rebuild_mask();
  return m;
}

ComponentModel ComponentModel::from_config(const KeyValue& kv,
                                           const std::string& section) {
  const std::string pre = section.empty() ? "" : section + ".";
  const std::string kind = kv.str(pre + "kind");
  if (kind == "sg") {
    SgParams p;
    p.M = kv.f64(pre + "M");
    p.D = kv.f64(pre + "D");
    p.X_d = kv.f64(pre + "X_d");
    p.X_dp = kv.f64(pre + "X_dp");
    p.X_q = kv.f64(pre + "X_q");
    p.X_qp = kv.f64(pre + "X_qp");
    p.T_do_p = kv.f64(pre + "T_do_p");
    p.T_qo_p = kv.f64(pre + "T_qo_p");
    p.R = kv.f64(pre + "R");
    p.omega_o = kv.f64(pre + "omega_o");
    ExciterParams ex{kv.f64(pre + "T_A"), kv.f64(pre + "K_A")};
    GovernorParams gov{kv.f64(pre + "T_SV"), kv.f64(pre + "R_D")};
    return sg(p, ex, gov);
  }
  if (kind == "gfm") {
    GfmControlGains g;
    g.omega_c = kv.f64_or(pre + "omega_c", 0.0);
    g.d_f = kv.f64_or(pre + "d_f", 0.0);
    g.d_v = kv.f64_or(pre + "d_v", 0.0);
    g.m_f = kv.f64_or(pre + "m_f", 0.0);
    g.d_d = kv.f64_or(pre + "d_d", 0.0);
    g.kappa_1 = kv.f64_or(pre + "kappa_1", 0.0);
    g.kappa_2 = kv.f64_or(pre + "kappa_2", 0.0);
    g.V_o = kv.f64(pre + "V_o");
    g.omega_o = kv.f64(pre + "omega_o");
    const double L = kv.f64(pre + "L");
    const GfmStrategy strategy = gfm_strategy_from_string(kv.str(pre + "strategy"));
    return gfm(gfm_gains_from_strategy(strategy, g, g.V_o, L));
  }
  throw ConfigError("component kind must be sg or gfm, got: " + kind);
}

void ComponentModel::rebuild_mask() {
  mask_.fill(false);
  if (kind_ == ComponentKind::Sg) {
    mask_[3] = (sg_.T_qo_p == 0.0);
  } else {
    mask_[1] = (gfm_.tau_f == 0.0);
    mask_[2] = (gfm_.tau_v == 0.0);
    mask_[3] = (gfm_.tau_p == 0.0);
    mask_[4] = (gfm_.tau_p == 0.0);
  }
}

double ComponentModel::omega_o() const {
  return kind_ == ComponentKind::Sg ? sg_.omega_o : gfm_.omega_o;
}

double ComponentModel::f_nominal() const {
  return omega_o() / (2.0 * std::numbers::pi);
}

int ComponentModel::n_diff() const {
  int n = 0;
  for (int i = 0; i < dim(); ++i)
    if (!mask_[static_cast<std::size_t>(i)]) ++n;
  return n;
}

Eigen::VectorXd ComponentModel::resolve(Eigen::VectorXd full,
                                        const TerminalVoltage& y,
                                        const Setpoints& u) const {
  if (kind_ == ComponentKind::Sg) {
    if (sg_.T_qo_p == 0.0) {
      SgDerivs d = sg_derivatives(sg_, ex_, gov_, sg_from_vec(full), y, u);
      full[3] = d.value[3];
    }
    return full;
  }
  GfmState s = gfm_resolve(gfm_, gfm_from_vec(full), y, u);
  full << s.delta, s.omega, s.e_star, s.p_m, s.q_m, s.i_d, s.i_q;
  return full;
}

Eigen::VectorXd ComponentModel::derivs(const Eigen::VectorXd& full,
                                       const TerminalVoltage& y,
                                       const Setpoints& u) const {
  Eigen::VectorXd out(dim());
  if (kind_ == ComponentKind::Sg) {
    SgDerivs d = sg_derivatives(sg_, ex_, gov_, sg_from_vec(full), y, u);
    for (int i = 0; i < SgState::kDim; ++i)
      out[i] = d.algebraic[static_cast<std::size_t>(i)] ? 0.0 : d.value[static_cast<std::size_t>(i)];
  } else {
    GfmDerivs d = gfm_derivatives(gfm_, gfm_from_vec(full), y, u);
    for (int i = 0; i < GfmState::kDim; ++i)
      out[i] = d.algebraic[static_cast<std::size_t>(i)] ? 0.0 : d.value[static_cast<std::size_t>(i)];
  }
  return out;
}

ReducedState ComponentModel::reduce(const Eigen::VectorXd& resolved_full) const {
  return reduce_state(kind_, resolved_full);
}

std::pair<double, double> ComponentModel::internal_emf(const Eigen::VectorXd& diff,
                                                       const Setpoints& u) const {
  if (kind_ == ComponentKind::Sg) {
    // All six slots integrated (enforced by validate_for_simulation).
    return {std::hypot(diff[3], diff[2]), diff[0]};
  }
  const double delta = diff[0];
  if (gfm_.tau_v > 0.0) {
    // E* is integrated; locate it within the packed vector.
    int idx = 0;
    for (int slot = 0; slot < 2; ++slot)
      if (!mask_[static_cast<std::size_t>(slot)]) ++idx;
    return {diff[idx], delta};
  }
  // E* instantaneous: V_o + kappa_v*(Q* - q_m); q_m is integrated here.
  int idx = 0;
  for (int slot = 0; slot < 4; ++slot)
    if (!mask_[static_cast<std::size_t>(slot)]) ++idx;
  const double q_m = diff[idx];
  return {gfm_.gains.V_o + gfm_.kappa_v * (u.aux - q_m), delta};
}

Eigen::VectorXd ComponentModel::pack(const Eigen::VectorXd& full) const {
  Eigen::VectorXd out(n_diff());
  int j = 0;
  for (int i = 0; i < dim(); ++i)
    if (!mask_[static_cast<std::size_t>(i)]) out[j++] = full[i];
  return out;
}

Eigen::VectorXd ComponentModel::unpack(const Eigen::VectorXd& diff,
                                       const TerminalVoltage& y,
                                       const Setpoints& u) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(dim());
  int j = 0;
  for (int i = 0; i < dim(); ++i)
    if (!mask_[static_cast<std::size_t>(i)]) full[i] = diff[j++];
  return resolve(std::move(full), y, u);
}

Eigen::VectorXd ComponentModel::equilibrium(const TerminalVoltage& y,
                                            const Setpoints& u) const {
  if (kind_ == ComponentKind::Sg) {
    SgState s = sg_equilibrium(sg_, ex_, gov_, y, u);
    Eigen::VectorXd out(SgState::kDim);
    out << s.delta, s.omega, s.e_qp, s.e_dp, s.e_fd, s.p_m;
    return out;
  }
  GfmState s = gfm_equilibrium(gfm_, y, u);
  Eigen::VectorXd out(GfmState::kDim);
  out << s.delta, s.omega, s.e_star, s.p_m, s.q_m, s.i_d, s.i_q;
  return out;
}

void ComponentModel::validate_for_simulation() const {
  if (kind_ == ComponentKind::Sg) {
    if (sg_.T_qo_p == 0.0)
      throw std::domain_error(
          "simulation needs T_qo_p > 0: with the e_dp slot instantaneous the "
          "internal EMF would depend on the terminal solve");
    return;
  }
  if (gfm_.tau_v == 0.0 && gfm_.tau_p == 0.0)
    throw std::domain_error(
        "simulation needs tau_v > 0 or tau_p > 0: otherwise the internal EMF "
        "would depend on the terminal solve");
}

}  // namespace dynlearn
