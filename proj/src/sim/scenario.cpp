#include "dynlearn/sim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <exception>

#include "dynlearn/support/csv.hpp"
#include "dynlearn/support/errors.hpp"
#include "dynlearn/support/newton.hpp"

namespace dynlearn {

IntegrationMethod integration_method_from_string(const std::string& s) {
  if (s == "euler") return IntegrationMethod::Euler;
  if (s == "rk4") return IntegrationMethod::Rk4;
  throw ConfigError("unknown integration method: " + s);
}

namespace {

void validate_scenario(const Scenario& s) {
  if (s.duration <= 0.0) throw ConfigError("scenario duration must be positive");
  if (s.sim_rate <= 0 || s.output_rate <= 0)
    throw ConfigError("scenario rates must be positive");
  if (s.sim_rate % s.output_rate != 0)
    throw ConfigError("sim_rate must be an integer multiple of output_rate");
  if (s.smooth_window < 1)
    throw ConfigError("smoothing window must be at least one sample");
  if (s.fault.cycles < 0) throw ConfigError("fault cycles must be non-negative");
  if (s.fault.cycles > 0 &&
      (s.fault.location_frac < 0.0 || s.fault.location_frac > 1.0))
    throw ConfigError("fault location must lie in [0, 1]");
  if (s.fault.cycles > 0 && s.fault.x_fault <= 0.0)
    throw ConfigError("fault reactance must be positive");
}

/// Set-points in effect at sample index k (steps are cumulative).
Setpoints setpoints_at(const Scenario& s, long long k) {
  Setpoints u = s.base;
  for (const auto& step : s.steps) {
    const long long k_step = std::llround(step.t * s.sim_rate);
    if (k >= k_step) u.p_star += step.dp_star;
  }
  return u;
}

}  // namespace

std::vector<Scenario> generate_scenarios(const SweepSpec& sweep) {
  if (sweep.locations < 1 || sweep.sites < 1)
    throw ConfigError("sweep needs at least one fault location");
  if (sweep.durations.empty())
    throw ConfigError("sweep produced no scenarios: no fault durations given");
  if (sweep.dp_star.empty())
    throw ConfigError("sweep produced no scenarios: no set-point levels given");
  if (sweep.count == 0)
    throw ConfigError("sweep produced no scenarios: count is zero");
  for (int cycles : sweep.durations)
    if (cycles < 0 || cycles > 10)
      throw ConfigError("fault durations must lie in [0, 10] cycles");

  const int n_pts = sweep.locations * sweep.sites;
  std::vector<Scenario> out;
  int id = 0;
  for (int site = 0; site < sweep.sites; ++site) {
    for (int loc = 0; loc < sweep.locations; ++loc) {
      const int pt = site * sweep.locations + loc;
      const double frac =
          n_pts == 1 ? 0.5 : 0.1 + 0.8 * static_cast<double>(pt) / (n_pts - 1);
      for (int cycles : sweep.durations) {
        for (double dp : sweep.dp_star) {
          if (sweep.count >= 0 && id >= sweep.count) return out;
          Scenario s;
          s.id = id++;
          s.base = sweep.base;
          s.fault.t_start = sweep.fault_t_start;
          s.fault.cycles = cycles;
          s.fault.location_frac = frac;
          s.fault.x_fault = sweep.x_fault;
          s.duration = sweep.duration;
          s.sim_rate = sweep.sim_rate;
          s.output_rate = sweep.output_rate;
          s.smooth_window = sweep.smooth_window;
          if (dp != 0.0) {
            const double t_clear = sweep.fault_t_start + cycles / sweep.f_nominal;
            s.steps.push_back({t_clear + sweep.step_delay, dp});
          }
          validate_scenario(s);
          out.push_back(std::move(s));
        }
      }
    }
  }
  return out;
}

Eigen::VectorXd equilibrate_with_network(const ComponentModel& component,
                                         const NetworkModel& net,
                                         const Setpoints& u) {
  // Start from the fixed-terminal equilibrium at the infinite-bus phasor and
  // continue toward the network-consistent solution by blending the terminal
  // voltage between that fixed value and the divider output.  A high-gain
  // voltage regulator makes the fully coupled residual wildly inconsistent at
  // the warm start, so jumping straight to the closed loop can strand Newton
  // far from the physical branch.
  const TerminalVoltage y_fixed{net.E_inf, net.theta_inf};
  Eigen::VectorXd x = component.pack(component.equilibrium(y_fixed, u));

  auto residual_at = [&](double blend, const Eigen::VectorXd& xd) -> Eigen::VectorXd {
    const auto [emf_mag, emf_ang] = component.internal_emf(xd, u);
    const TerminalVoltage y_div =
        solve_terminal_voltage(net, emf_mag, emf_ang, false, 0.5);
    const TerminalVoltage y{(1.0 - blend) * y_fixed.v + blend * y_div.v,
                            (1.0 - blend) * y_fixed.theta + blend * y_div.theta};
    const Eigen::VectorXd full = component.unpack(xd, y, u);
    return component.pack(component.derivs(full, y, u));
  };

  NewtonOptions opt;
  opt.tol = 1e-10;
  double blend = 0.0;
  double step = 1.0;
  while (blend < 1.0) {
    const double next = std::min(1.0, blend + step);
    auto residual = [&](const Eigen::VectorXd& xd) { return residual_at(next, xd); };
    try {
      x = newton_solve(residual, x, opt);
      blend = next;
    } catch (const ConvergenceError&) {
      step *= 0.5;
      if (step < 1e-3)
        throw ConvergenceError("network equilibrium continuation stalled", step);
    }
  }
  return x;
}

Trajectory simulate_scenario(const ComponentModel& component,
                             const NetworkModel& net, const Scenario& scenario,
                             IntegrationMethod method) {
  validate_scenario(scenario);
  component.validate_for_simulation();

  const double f_nom = component.f_nominal();
  const long long n = std::llround(scenario.duration * scenario.sim_rate) + 1;
  const double dt = 1.0 / scenario.sim_rate;
  const long long k_fault_on =
      std::llround(scenario.fault.t_start * scenario.sim_rate);
  const long long k_fault_off =
      k_fault_on +
      std::llround(scenario.fault.cycles * scenario.sim_rate / f_nom);

  Trajectory full;
  full.t.reserve(n);
  full.x.reserve(n);
  full.y.reserve(n);
  full.u.reserve(n);
  full.meta.id = scenario.id;
  full.meta.kind = component.kind();
  full.meta.scenario = scenario;

  Eigen::VectorXd xd =
      equilibrate_with_network(component, net, setpoints_at(scenario, 0));

  auto f = [&](const Eigen::VectorXd& v, const TerminalVoltage& y,
               const Setpoints& u) -> Eigen::VectorXd {
    const Eigen::VectorXd fullstate = component.unpack(v, y, u);
    return component.pack(component.derivs(fullstate, y, u));
  };

  for (long long k = 0; k < n; ++k) {
    if (xd.cwiseAbs().maxCoeff() > 1e6)
      throw DivergenceError("state magnitude exceeded 1e6",
                            static_cast<double>(k) / scenario.sim_rate);

    const Setpoints u_k = setpoints_at(scenario, k);
    const bool faulted =
        scenario.fault.cycles > 0 && k >= k_fault_on && k < k_fault_off;
    const auto [emf_mag, emf_ang] = component.internal_emf(xd, u_k);
    const TerminalVoltage y_k = solve_terminal_voltage(
        net, emf_mag, emf_ang, faulted, scenario.fault.location_frac);

    const Eigen::VectorXd state = component.unpack(xd, y_k, u_k);
    full.t.push_back(static_cast<double>(k) / scenario.sim_rate);
    full.x.push_back(component.reduce(state));
    full.y.push_back(y_k);
    full.u.push_back(u_k);

    if (k + 1 < n) xd = step_once(method, f, xd, y_k, u_k, dt);
  }

  return downsample(full, scenario.sim_rate / scenario.output_rate,
                    scenario.smooth_window);
}

SimBatchResult simulate_batch(const ComponentModel& component,
                              const NetworkModel& net,
                              const std::vector<Scenario>& scenarios,
                              IntegrationMethod method, ExecMode mode) {
  const std::size_t n = scenarios.size();
  SimBatchResult result;
  result.trajectories.assign(n, std::nullopt);
  std::vector<char> diverged(n, 0);
  std::vector<std::exception_ptr> errors(n);

  parallel_for(n, mode, [&](std::size_t i) {
    try {
      result.trajectories[i] =
          simulate_scenario(component, net, scenarios[i], method);
    } catch (const DivergenceError&) {
      diverged[i] = 1;
    } catch (...) {
      errors[i] = std::current_exception();
    }
  });

  for (std::size_t i = 0; i < n; ++i)
    if (errors[i]) std::rethrow_exception(errors[i]);
  for (std::size_t i = 0; i < n; ++i)
    if (diverged[i]) result.diverged_ids.push_back(scenarios[i].id);
  std::sort(result.diverged_ids.begin(), result.diverged_ids.end());
  return result;
}

Trajectory downsample(const Trajectory& full, int factor, int window) {
  if (factor < 1) throw ConfigError("decimation factor must be at least 1");
  if (window < 1) throw ConfigError("smoothing window must be at least 1");
  const long long n = static_cast<long long>(full.size());
  const long long reach_back = (window - 1 + 1) / 2;  // ceil((window-1)/2)
  const long long reach_fwd = (window - 1) / 2;

  auto smooth = [&](long long i, auto&& get) -> double {
    const long long lo = std::max<long long>(0, i - reach_back);
    const long long hi = std::min<long long>(n - 1, i + reach_fwd);
    double acc = 0.0;
    for (long long j = lo; j <= hi; ++j) acc += get(j);
    return acc / static_cast<double>(hi - lo + 1);
  };

  Trajectory out;
  out.meta = full.meta;
  for (long long i = 0; i < n; i += factor) {
    out.t.push_back(full.t[i]);
    ReducedState xs;
    xs.delta = smooth(i, [&](long long j) { return full.x[j].delta; });
    xs.omega = smooth(i, [&](long long j) { return full.x[j].omega; });
    xs.e = smooth(i, [&](long long j) { return full.x[j].e; });
    out.x.push_back(xs);
    TerminalVoltage ys;
    ys.v = smooth(i, [&](long long j) { return full.y[j].v; });
    ys.theta = smooth(i, [&](long long j) { return full.y[j].theta; });
    out.y.push_back(ys);
    out.u.push_back(full.u[i]);
  }
  return out;
}

void write_trajectory_csv(const std::filesystem::path& path,
                          const Trajectory& traj) {
  CsvTable table;
  table.header = {"t",     "delta", "omega",  "E",
                  "V",     "theta", "P_star", "Q_or_V_star"};
  table.rows.reserve(traj.size());
  for (std::size_t i = 0; i < traj.size(); ++i)
    table.rows.push_back({traj.t[i], traj.x[i].delta, traj.x[i].omega,
                          traj.x[i].e, traj.y[i].v, traj.y[i].theta,
                          traj.u[i].p_star, traj.u[i].aux});
  write_csv(path, table);
}

Trajectory read_trajectory_csv(const std::filesystem::path& path) {
  const CsvTable table = read_csv(path);
  const std::vector<std::string> expected = {"t",     "delta", "omega",  "E",
                                             "V",     "theta", "P_star", "Q_or_V_star"};
  if (table.header != expected)
    throw IoError("unexpected trajectory header in " + path.string());
  Trajectory traj;
  traj.t.reserve(table.rows.size());
  for (const auto& row : table.rows) {
    traj.t.push_back(row[0]);
    traj.x.push_back({row[1], row[2], row[3]});
    traj.y.push_back({row[4], row[5]});
    traj.u.push_back({row[6], row[7]});
  }
  return traj;
}

}  // namespace dynlearn
