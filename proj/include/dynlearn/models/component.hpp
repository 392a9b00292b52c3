#pragma once

#include <optional>
#include <utility>

#include <Eigen/Dense>

#include "dynlearn/models/gfm.hpp"
#include "dynlearn/models/sg.hpp"
#include "dynlearn/support/config.hpp"

namespace dynlearn {

/// Reduced learning state extracted from a resolved full state.
ReducedState reduce_state(ComponentKind kind, const Eigen::VectorXd& full);

/// Uniform dynamic-model interface over the two component families. Full
/// states are dense vectors (6 machine slots or 7 inverter slots); slots with
/// zero time constants are instantaneous and excluded from integration.
class ComponentModel {
 public:
  static ComponentModel sg(const SgParams& p, const ExciterParams& ex,
                           const GovernorParams& gov);
  static ComponentModel gfm(const GfmParams& p);
  /// Reads the flat key-value parameter block; `section` may be empty for a
  /// standalone component parameter file.
  static ComponentModel from_config(const KeyValue& kv, const std::string& section);

  ComponentKind kind() const { return kind_; }
  double omega_o() const;
  double f_nominal() const;

  int dim() const { return kind_ == ComponentKind::Sg ? SgState::kDim : GfmState::kDim; }
  int n_diff() const;
  bool algebraic(int slot) const { return mask_[static_cast<std::size_t>(slot)]; }

  /// Overwrites instantaneous slots with their closed-form values.
  Eigen::VectorXd resolve(Eigen::VectorXd full, const TerminalVoltage& y,
                          const Setpoints& u) const;

  /// Derivatives of the integrated slots (instantaneous slots carry zero).
  /// Resolves internally, so unresolved inputs are accepted.
  Eigen::VectorXd derivs(const Eigen::VectorXd& full, const TerminalVoltage& y,
                         const Setpoints& u) const;

  ReducedState reduce(const Eigen::VectorXd& resolved_full) const;

  /// Internal EMF (magnitude, angle) for the network coupling, computable
  /// from integrated slots alone; see validate_for_simulation.
  std::pair<double, double> internal_emf(const Eigen::VectorXd& diff,
                                         const Setpoints& u) const;

  Eigen::VectorXd pack(const Eigen::VectorXd& full) const;
  Eigen::VectorXd unpack(const Eigen::VectorXd& diff, const TerminalVoltage& y,
                         const Setpoints& u) const;

  /// Fixed-terminal equilibrium (full resolved state).
  Eigen::VectorXd equilibrium(const TerminalVoltage& y, const Setpoints& u) const;

  /// The simulation loop needs the EMF before the terminal solve, which
  /// requires every instantaneous voltage path to be terminal-free. Throws
  /// std::domain_error for parameterizations where that fails.
  void validate_for_simulation() const;

  const SgParams& sg_params() const { return sg_; }
  const ExciterParams& exciter_params() const { return ex_; }
  const GovernorParams& governor_params() const { return gov_; }
  const GfmParams& gfm_params() const { return gfm_; }

 private:
  ComponentKind kind_ = ComponentKind::Sg;
  SgParams sg_;
  ExciterParams ex_;
  GovernorParams gov_;
  GfmParams gfm_;
  std::array<bool, 7> mask_{};  // algebraic slots; first dim() entries valid

  void rebuild_mask();
};

}  // namespace dynlearn
