#include "dynlearn/sens/sensitivity.hpp"

#include <cmath>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {
namespace {

/// Normalized window at prediction row r, with fed-back state predictions.
NormWindow window_at(const Trajectory& traj,
                     const std::vector<Eigen::Vector3d>& phys_x,
                     const Normalizer& norm, long long r) {
  NormWindow w;
  for (int s = 0; s < kWindow; ++s) {
    const auto row = static_cast<std::size_t>(r - kWindow + s);
    w.x[s] = norm.norm_x(phys_x[row]);
    w.y[s] = norm.norm_y({traj.y[row].v, traj.y[row].theta});
    w.u[s] = norm.norm_u({traj.u[row].p_star, traj.u[row].aux});
  }
  return w;
}

bool outside_envelope(const Eigen::Vector3d& x, const Normalizer& norm) {
  for (int c = 0; c < 3; ++c) {
    const double range = std::max(norm.x_max[c] - norm.x_min[c], 1e-9);
    if (x[c] < norm.x_min[c] - 10.0 * range || x[c] > norm.x_max[c] + 10.0 * range)
      return true;
  }
  return false;
}

}  // namespace

SimSensitivity fd_sensitivity_sim(const ComponentModel& component,
                                  const NetworkModel& net,
                                  const Scenario& scenario,
                                  IntegrationMethod method,
                                  const SensitivityConfig& cfg) {
  if (cfg.eps <= 0.0) throw ConfigError("sensitivity eps must be positive");
  const double k_out = cfg.t_perturb * scenario.output_rate;
  if (std::abs(k_out - std::llround(k_out)) > 1e-9)
    throw ConfigError("perturbation time must lie on the output grid");

  Scenario perturbed = scenario;
  perturbed.steps.push_back({cfg.t_perturb, cfg.eps});

  SimSensitivity out;
  out.base = simulate_scenario(component, net, scenario, method);
  const Trajectory bumped = simulate_scenario(component, net, perturbed, method);
  out.t = out.base.t;
  out.j_omega.reserve(out.base.size());
  for (std::size_t i = 0; i < out.base.size(); ++i)
    out.j_omega.push_back((bumped.x[i].omega - out.base.x[i].omega) / cfg.eps);
  return out;
}

double model_sensitivity_onestep(const Net& net, const NormWindow& w,
                                 const Normalizer& norm) {
  std::unique_ptr<Net> scratch = net.zeros_like();
  NormWindow ig;
  net.backward(w, Eigen::Vector3d::Unit(1), *scratch, &ig);
  double acc = 0.0;
  for (int s = 0; s < kWindow; ++s) acc += ig.u[s][0];
  return norm.x_std[1] * acc / norm.u_std[0];
}

RolloutSensitivity rollout_sensitivity(const Net& net, const Trajectory& traj,
                                       const Normalizer& norm,
                                       long long perturb_row) {
  const long long t_len = static_cast<long long>(traj.size());
  if (t_len <= kWindow)
    throw ConfigError("trajectory too short for a rollout");

  std::vector<Eigen::Vector3d> phys_x(static_cast<std::size_t>(t_len),
                                      Eigen::Vector3d::Zero());
  std::vector<Eigen::Vector3d> sens(static_cast<std::size_t>(t_len),
                                    Eigen::Vector3d::Zero());
  for (int r = 0; r < kWindow; ++r)
    phys_x[static_cast<std::size_t>(r)] = {traj.x[static_cast<std::size_t>(r)].delta,
                                           traj.x[static_cast<std::size_t>(r)].omega,
                                           traj.x[static_cast<std::size_t>(r)].e};

  std::unique_ptr<Net> scratch = net.zeros_like();
  RolloutSensitivity out;
  for (long long r = kWindow; r < t_len; ++r) {
    const NormWindow w = window_at(traj, phys_x, norm, r);
    const Eigen::Vector3d x_hat = norm.denorm_x(net.forward(w));
    phys_x[static_cast<std::size_t>(r)] = x_hat;
    if (outside_envelope(x_hat, norm)) {
      out.diverged = true;
      break;
    }

    std::array<NormWindow, 3> ig;
    for (int j = 0; j < 3; ++j)
      net.backward(w, Eigen::Vector3d::Unit(j), *scratch, &ig[j]);

    Eigen::Vector3d s_r = Eigen::Vector3d::Zero();
    for (int j = 0; j < 3; ++j) {
      double acc = 0.0;
      for (int s = 0; s < kWindow; ++s) {
        const long long row = r - kWindow + s;
        const Eigen::Vector3d sn_prev =
            sens[static_cast<std::size_t>(row)].cwiseQuotient(norm.x_std);
        acc += ig[j].x[s].dot(sn_prev);
        if (row >= perturb_row) acc += ig[j].u[s][0] / norm.u_std[0];
      }
      s_r[j] = norm.x_std[j] * acc;
    }
    sens[static_cast<std::size_t>(r)] = s_r;
    out.t.push_back(traj.t[static_cast<std::size_t>(r)]);
    out.j_omega.push_back(s_r[1]);
  }
  return out;
}

}  // namespace dynlearn
