#pragma once

#include <optional>

#include "dynlearn/models/types.hpp"

namespace dynlearn {

/// Two-axis synchronous machine constants. Per unit on the machine base,
/// speed in electrical rad/s, time constants in seconds.
struct SgParams {
  double M = 0.0;       ///< inertia constant (s^2 * pu)
  double D = 0.0;       ///< damping (pu * s)
  double X_d = 0.0;     ///< d-axis synchronous reactance
  double X_dp = 0.0;    ///< d-axis transient reactance
  double X_q = 0.0;     ///< q-axis synchronous reactance
  double X_qp = 0.0;    ///< q-axis transient reactance
  double T_do_p = 0.0;  ///< d-axis open-circuit transient time constant
  double T_qo_p = 0.0;  ///< q-axis open-circuit transient time constant; zero
                        ///< collapses e_dp to its algebraic value
  double R = 0.0;       ///< stator resistance
  double omega_o = 0.0; ///< nominal electrical speed (rad/s)
  void validate() const;
};

/// First-order voltage regulator driving the field voltage toward
/// K_A * (V_ref - V).
struct ExciterParams {
  double T_A = 0.0;
  double K_A = 0.0;
  void validate() const;
};

/// First-order governor with speed droop 1/R_D on (omega/omega_o - 1).
struct GovernorParams {
  double T_SV = 0.0;
  double R_D = 0.0;
  void validate() const;
};

struct SgState {
  double delta = 0.0;  ///< rotor angle (rad), unwrapped
  double omega = 0.0;  ///< rotor speed (rad/s)
  double e_qp = 0.0;   ///< q-axis transient voltage
  double e_dp = 0.0;   ///< d-axis transient voltage
  double e_fd = 0.0;   ///< field voltage
  double p_m = 0.0;    ///< mechanical power
  static constexpr int kDim = 6;
};

struct DqCurrents {
  double i_d = 0.0;
  double i_q = 0.0;
};

using SgDerivs = SlotDerivs<SgState::kDim>;

/// Stator currents from the linear dq network relation
///   R*i_d - X_q*i_q = e_dp - V sin(delta - theta)
///   R*i_q + X_d*i_d = e_qp - V cos(delta - theta)
/// Throws SingularSystemError when R^2 + X_d*X_q < 1e-12.
DqCurrents sg_stator_currents(const SgParams& p, double delta, double e_qp,
                              double e_dp, const TerminalVoltage& y);

/// Time derivatives of all six states under held terminal conditions. With
/// T_qo_p == 0 the e_dp slot is algebraic and carries (X_q - X_qp) * i_q.
SgDerivs sg_derivatives(const SgParams& p, const ExciterParams& ex,
                        const GovernorParams& gov, const SgState& s,
                        const TerminalVoltage& y, const Setpoints& u);

/// Newton solve of sg_derivatives == 0 at fixed terminal conditions.
SgState sg_equilibrium(const SgParams& p, const ExciterParams& ex,
                       const GovernorParams& gov, const TerminalVoltage& y,
                       const Setpoints& u,
                       const std::optional<SgState>& guess = std::nullopt);

}  // namespace dynlearn
