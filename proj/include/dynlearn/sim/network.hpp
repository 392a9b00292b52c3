#pragma once

#include "dynlearn/models/types.hpp"
#include "dynlearn/support/config.hpp"

namespace dynlearn {

/// Single-machine-infinite-bus surrogate: the component EMF sits behind a
/// coupling reactance X_src, the terminal bus connects to the infinite bus
/// E_inf at angle theta_inf through X_line, and a fault is a shunt reactance
/// X_fault tapped a fraction of the way down the line.
struct NetworkModel {
  double E_inf = 1.0;
  double theta_inf = 0.0;
  double X_line = 0.4;
  double X_fault = 0.05;
  double X_src = 0.2;
  void validate() const;
  static NetworkModel from_config(const KeyValue& kv, const std::string& section);
};

/// Closed-form terminal phasor from the reactive divider. location_frac is
/// the fault tap position measured from the terminal (0 = at the terminal,
/// 1 = at the infinite bus).
TerminalVoltage solve_terminal_voltage(const NetworkModel& net, double e_internal,
                                       double delta, bool faulted,
                                       double location_frac);

}  // namespace dynlearn
