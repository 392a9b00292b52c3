#pragma once

#include "dynlearn/nn/net.hpp"
#include "dynlearn/sim/scenario.hpp"

namespace dynlearn {

struct SensitivityConfig {
  double t_perturb = 1.0;  ///< seconds; must lie on the output grid
  double eps = 1e-3;       ///< set-point perturbation, per unit
};

/// Finite-difference sensitivity of the simulated frequency to the active
/// power set-point: two runs that share every operation until the
/// perturbation sample, so the difference is exactly zero before it.
struct SimSensitivity {
  std::vector<double> t;
  std::vector<double> j_omega;  ///< d omega / d P_star, physical units
  Trajectory base;              ///< the unperturbed run
};

SimSensitivity fd_sensitivity_sim(const ComponentModel& component,
                                  const NetworkModel& net,
                                  const Scenario& scenario,
                                  IntegrationMethod method,
                                  const SensitivityConfig& cfg);

/// Derivative of a single prediction with respect to a persistent unit
/// set-point change applied to every window frame (window states held fixed).
double model_sensitivity_onestep(const Net& net, const NormWindow& w,
                                 const Normalizer& norm);

/// Sensitivity of the closed-loop rollout: state perturbations are carried
/// through the fed-back predictions, set-point perturbations enter every
/// window frame at or after the perturbation row. Three reverse passes per
/// step recover the full state and input Jacobian blocks.
struct RolloutSensitivity {
  std::vector<double> t;        ///< times of predicted rows
  std::vector<double> j_omega;  ///< physical d omega-hat / d P_star
  bool diverged = false;
};

RolloutSensitivity rollout_sensitivity(const Net& net, const Trajectory& traj,
                                       const Normalizer& norm,
                                       long long perturb_row);

}  // namespace dynlearn
