#pragma once

#include <filesystem>
#include <optional>
#include <vector>

#include "dynlearn/models/component.hpp"
#include "dynlearn/sim/integrator.hpp"
#include "dynlearn/sim/network.hpp"
#include "dynlearn/support/parallel.hpp"

namespace dynlearn {

/// Shunt fault on the line. Duration is counted in nominal-frequency cycles;
/// zero cycles means the fault never applies.
struct FaultEvent {
  double t_start = 0.2;
  int cycles = 0;
  double location_frac = 0.5;
  double x_fault = 0.05;
};

/// Additive step on the active-power set-point at time t.
struct SetpointStep {
  double t = 0.0;
  double dp_star = 0.0;
};

struct Scenario {
  int id = 0;
  Setpoints base;
  std::vector<SetpointStep> steps;
  FaultEvent fault;
  double duration = 3.0;   ///< seconds
  int sim_rate = 10000;    ///< Hz; must be a multiple of output_rate
  int output_rate = 100;   ///< Hz
  int smooth_window = 11;  ///< moving-average width in sim-rate samples
};

struct TrajectoryMeta {
  int id = -1;
  ComponentKind kind = ComponentKind::Gfm;
  Scenario scenario;
};

/// Uniformly sampled component trajectory: reduced states, terminal phasor,
/// and applied set-points per sample.
struct Trajectory {
  std::vector<double> t;
  std::vector<ReducedState> x;
  std::vector<TerminalVoltage> y;
  std::vector<Setpoints> u;
  TrajectoryMeta meta;
  std::size_t size() const { return t.size(); }
};

/// Deterministic scenario sweep: (sites x locations) fault positions uniform
/// on [0.1, 0.9], fault durations in cycles, and an optional product
/// dimension of post-clearance set-point steps.
struct SweepSpec {
  int locations = 1;
  int sites = 1;
  std::vector<int> durations;      ///< cycles, each in [0, 10]; 0 = no fault
  std::vector<double> dp_star = {0.0};  ///< 0 means no step
  double step_delay = 0.5;         ///< seconds after fault clearance
  int count = -1;                  ///< truncate enumeration; -1 = all
  double f_nominal = 50.0;         ///< Hz; fixes clearance-relative step times
  double fault_t_start = 0.2;
  double x_fault = 0.05;
  double duration = 3.0;
  int sim_rate = 10000;
  int output_rate = 100;
  int smooth_window = 11;
  Setpoints base;
};

std::vector<Scenario> generate_scenarios(const SweepSpec& sweep);

/// Equilibrium of the component coupled to the network (no fault): solves the
/// dynamic residual with the terminal phasor recomputed from the state, so
/// simulations started here hold exactly.
Eigen::VectorXd equilibrate_with_network(const ComponentModel& component,
                                         const NetworkModel& net,
                                         const Setpoints& u);

/// Fixed-step simulation: per sample the terminal phasor is solved from the
/// current EMF, the sample is recorded, then one integrator step advances the
/// integrated slots with terminal conditions and set-points held. Records at
/// sim rate, then smooths and decimates to the output rate. Throws
/// DivergenceError when any state magnitude exceeds 1e6.
Trajectory simulate_scenario(const ComponentModel& component,
                             const NetworkModel& net, const Scenario& scenario,
                             IntegrationMethod method);

struct SimBatchResult {
  std::vector<std::optional<Trajectory>> trajectories;  ///< slot per scenario
  std::vector<int> diverged_ids;                        ///< ascending
};

/// Simulates independent scenarios, optionally in parallel; divergences are
/// recorded per scenario instead of aborting the batch.
SimBatchResult simulate_batch(const ComponentModel& component,
                              const NetworkModel& net,
                              const std::vector<Scenario>& scenarios,
                              IntegrationMethod method, ExecMode mode);

/// Centered moving average (shrunken one-sided at the edges) on state and
/// terminal-voltage channels followed by decimation; set-point channels are
/// exact commands and are decimated without smoothing.
Trajectory downsample(const Trajectory& full, int factor, int window);

/// Pinned persistence schema: t,delta,omega,E,V,theta,P_star,Q_or_V_star with
/// 17 significant digits (value-exact round trip).
void write_trajectory_csv(const std::filesystem::path& path, const Trajectory& traj);
Trajectory read_trajectory_csv(const std::filesystem::path& path);

}  // namespace dynlearn
