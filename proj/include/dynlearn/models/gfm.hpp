#pragma once

#include <optional>
#include <string>

#include "dynlearn/models/types.hpp"

namespace dynlearn {

enum class GfmStrategy { Droop, Vsm, Dvoc };

std::string to_string(GfmStrategy s);
GfmStrategy gfm_strategy_from_string(const std::string& s);

/// Primitive control constants a vendor would quote; the generic model
/// coefficients below are derived from these per strategy.
struct GfmControlGains {
  double omega_c = 0.0;  ///< power measurement filter cutoff (rad/s)
  double d_f = 0.0;      ///< frequency droop coefficient
  double d_v = 0.0;      ///< voltage droop coefficient
  double m_f = 0.0;      ///< virtual inertia (VSM)
  double d_d = 0.0;      ///< virtual damping (VSM)
  double kappa_1 = 0.0;  ///< oscillator synchronization gain (dVOC)
  double kappa_2 = 0.0;  ///< oscillator voltage gain (dVOC)
  double V_o = 0.0;      ///< nominal voltage magnitude
  double omega_o = 0.0;  ///< nominal electrical speed (rad/s)
};

/// Generic grid-forming model coefficients. A zero time constant marks the
/// matching state as instantaneous (algebraic) rather than integrated.
struct GfmParams {
  double tau_f = 0.0;   ///< frequency dynamics time constant
  double tau_v = 0.0;   ///< voltage dynamics time constant
  double tau_p = 0.0;   ///< power measurement time constant
  double kappa_d = 0.0;
  double kappa_f = 0.0;
  double kappa_v = 0.0;
  double L = 0.0;       ///< filter inductance (s * pu); X = omega_o * L
  double omega_o = 0.0;
  GfmStrategy strategy = GfmStrategy::Droop;
  GfmControlGains gains;
  void validate() const;
  /// dVOC gains depend on the live internal voltage; other strategies are
  /// returned unchanged.
  GfmParams refreshed(double e_star_live) const;
};

/// Maps primitive gains to generic model coefficients for one strategy.
/// dVOC coefficients are functions of the live internal voltage magnitude.
GfmParams gfm_gains_from_strategy(GfmStrategy strategy, const GfmControlGains& g,
                                  double e_star_live, double L);

/// Voltage regulation characteristic: linear restoring for droop/VSM,
/// cubic oscillator law for dVOC.
double fv_eval(GfmStrategy strategy, double e_star, double V_o);

struct GfmState {
  double delta = 0.0;   ///< controller angle (rad), unwrapped
  double omega = 0.0;   ///< controller speed (rad/s)
  double e_star = 0.0;  ///< internal voltage magnitude command
  double p_m = 0.0;     ///< filtered active power measurement
  double q_m = 0.0;     ///< filtered reactive power measurement
  double i_d = 0.0;     ///< filter current, d axis
  double i_q = 0.0;     ///< filter current, q axis
  static constexpr int kDim = 7;
};

using GfmDerivs = SlotDerivs<GfmState::kDim>;

/// Overwrites instantaneous slots (those whose time constant is zero) with
/// their closed-form values given terminal conditions and set-points.
GfmState gfm_resolve(const GfmParams& p, GfmState s, const TerminalVoltage& y,
                     const Setpoints& u);

/// Derivatives of the seven-state generic model under held terminal
/// conditions. Instantaneous slots are flagged and carry their closed-form
/// state values.
GfmDerivs gfm_derivatives(const GfmParams& p, const GfmState& s,
                          const TerminalVoltage& y, const Setpoints& u);

/// Newton solve of the dynamic residual at fixed terminal conditions.
GfmState gfm_equilibrium(const GfmParams& p, const TerminalVoltage& y,
                         const Setpoints& u,
                         const std::optional<GfmState>& guess = std::nullopt);

}  // namespace dynlearn
