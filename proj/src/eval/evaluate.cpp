#include "dynlearn/eval/evaluate.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "dynlearn/support/csv.hpp"
#include "dynlearn/support/errors.hpp"

namespace dynlearn {
namespace {

using nlohmann::json;

/// Accumulates ||err||^2 and ||truth||^2 per channel; order omega, delta, E.
struct NmsePool {
  Eigen::Vector3d num = Eigen::Vector3d::Zero();
  Eigen::Vector3d den = Eigen::Vector3d::Zero();

  void add(const Eigen::Vector3d& pred, const Eigen::Vector3d& truth) {
    num += (pred - truth).cwiseAbs2();
    den += truth.cwiseAbs2();
  }
  std::vector<NmseRow> rows() const {
    auto value = [&](int c) {
      return std::sqrt(num[c]) / std::max(std::sqrt(den[c]), 1e-300);
    };
    return {{"omega", value(1)}, {"delta", value(0)}, {"E", value(2)}};
  }
};

bool outside_envelope(const Eigen::Vector3d& x, const Normalizer& norm) {
  for (int c = 0; c < 3; ++c) {
    const double range = std::max(norm.x_max[c] - norm.x_min[c], 1e-9);
    if (x[c] < norm.x_min[c] - 10.0 * range || x[c] > norm.x_max[c] + 10.0 * range)
      return true;
  }
  return false;
}

}  // namespace

Rollout rollout(const Net& net, const Trajectory& traj, const Normalizer& norm) {
  const long long t_len = static_cast<long long>(traj.size());
  if (t_len <= kWindow) throw ConfigError("trajectory too short for a rollout");

  std::vector<Eigen::Vector3d> phys_x(static_cast<std::size_t>(t_len));
  for (int r = 0; r < kWindow; ++r)
    phys_x[static_cast<std::size_t>(r)] = {traj.x[static_cast<std::size_t>(r)].delta,
                                           traj.x[static_cast<std::size_t>(r)].omega,
                                           traj.x[static_cast<std::size_t>(r)].e};

  Rollout out;
  for (long long r = kWindow; r < t_len; ++r) {
    NormWindow w;
    for (int s = 0; s < kWindow; ++s) {
      const auto row = static_cast<std::size_t>(r - kWindow + s);
      w.x[s] = norm.norm_x(phys_x[row]);
      w.y[s] = norm.norm_y({traj.y[row].v, traj.y[row].theta});
      w.u[s] = norm.norm_u({traj.u[row].p_star, traj.u[row].aux});
    }
    const Eigen::Vector3d x_hat = norm.denorm_x(net.forward(w));
    if (outside_envelope(x_hat, norm)) {
      out.diverged = true;
      return out;
    }
    phys_x[static_cast<std::size_t>(r)] = x_hat;
    out.pred.push_back(x_hat);
  }
  return out;
}

EvalReport evaluate_model(const Net& net, const Dataset& ds,
                          const std::vector<Trajectory>& trajectories) {
  EvalReport report;
  report.model_kind = net.kind();
  report.dataset_hash = ds.hash_hex;

  NmsePool val;
  for (const Sample& s : ds.test) {
    const Eigen::Vector3d x_hat =
        ds.norm.denorm_x(net.forward(normalize_window(s, ds.norm)));
    val.add(x_hat, s.target);
  }
  report.validation = val.rows();

  NmsePool pred;
  for (int id : ds.test_ids) {
    const auto it = std::find_if(
        trajectories.begin(), trajectories.end(),
        [&](const Trajectory& traj) { return traj.meta.id == id; });
    if (it == trajectories.end())
      throw ConfigError("test scenario " + std::to_string(id) +
                        " has no trajectory to roll out");
    const Rollout ro = rollout(net, *it, ds.norm);
    if (ro.diverged) {
      report.diverged_ids.push_back(id);
      continue;
    }
    for (std::size_t i = 0; i < ro.pred.size(); ++i) {
      const auto row = static_cast<std::size_t>(kWindow) + i;
      pred.add(ro.pred[i],
               {it->x[row].delta, it->x[row].omega, it->x[row].e});
    }
  }
  report.prediction = pred.rows();
  return report;
}

double evaluate_sensitivity(const Net& net, const SimSensitivity& reference,
                            const Normalizer& norm, long long perturb_row) {
  const RolloutSensitivity rs =
      rollout_sensitivity(net, reference.base, norm, perturb_row);
  if (rs.diverged) throw DivergenceError("sensitivity rollout diverged", 0.0);
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < rs.j_omega.size(); ++i) {
    const double ref = reference.j_omega[static_cast<std::size_t>(kWindow) + i];
    num += (rs.j_omega[i] - ref) * (rs.j_omega[i] - ref);
    den += ref * ref;
  }
  return std::sqrt(num) / std::max(std::sqrt(den), 1e-300);
}

bool one_step_not_worse(const EvalReport& report) {
  for (std::size_t c = 0; c < report.validation.size(); ++c) {
    const double val = report.validation[c].value;
    const double pred = report.prediction[c].value;
    if (val <= 1.05 * pred) continue;
    if (val < 0.02 && pred < 0.02) continue;
    return false;
  }
  return true;
}

void write_eval_report(const std::filesystem::path& path, const EvalReport& report) {
  json j;
  j["model"] = report.model_kind;
  j["split_hash"] = report.dataset_hash;
  json states;
  for (const NmseRow& row : report.validation)
    states[row.channel]["val_nmse"] = row.value;
  for (const NmseRow& row : report.prediction)
    states[row.channel]["pred_nmse"] = row.value;
  j["states"] = states;
  j["diverged"] = report.diverged_ids;
  if (report.has_sensitivity) j["sensitivity_nmse"] = report.sensitivity_nmse;
  j["config_hash"] = report.config_hash;
  j["checkpoint_id"] = report.checkpoint_id;
  write_text_file(path, j.dump(2) + "\n");
}

EvalReport read_eval_report(const std::filesystem::path& path) {
  const json j = json::parse(read_text_file(path));
  EvalReport r;
  r.model_kind = j.at("model").get<std::string>();
  r.dataset_hash = j.at("split_hash").get<std::string>();
  for (const char* channel : {"omega", "delta", "E"}) {
    if (!j.at("states").contains(channel)) continue;
    const json& s = j.at("states").at(channel);
    r.validation.push_back({channel, s.at("val_nmse").get<double>()});
    r.prediction.push_back({channel, s.at("pred_nmse").get<double>()});
  }
  r.diverged_ids = j.at("diverged").get<std::vector<int>>();
  if (j.contains("sensitivity_nmse")) {
    r.has_sensitivity = true;
    r.sensitivity_nmse = j.at("sensitivity_nmse").get<double>();
  }
  if (j.contains("config_hash")) r.config_hash = j.at("config_hash").get<std::string>();
  if (j.contains("checkpoint_id"))
    r.checkpoint_id = j.at("checkpoint_id").get<std::string>();
  return r;
}

namespace {

int strict_argmin(const std::vector<double>& xs) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < xs.size(); ++i)
    if (xs[i] < xs[best]) best = i;
  for (std::size_t i = 0; i < xs.size(); ++i)
    if (i != best && xs[i] == xs[best]) return -1;
  return static_cast<int>(best);
}

}  // namespace

Comparison compare_models(const std::vector<EvalReport>& reports) {
  if (reports.size() < 2)
    throw ConfigError("model comparison needs at least two reports");
  Comparison c;
  c.split_hash = reports.front().dataset_hash;
  bool all_sensitivity = true;
  for (const EvalReport& r : reports) {
    if (r.dataset_hash != c.split_hash)
      throw HashMismatchError("cannot compare reports from different splits: " +
                              c.split_hash + " vs " + r.dataset_hash);
    c.models.push_back(r.model_kind);
    all_sensitivity = all_sensitivity && r.has_sensitivity;
  }

  auto find_row = [](const std::vector<NmseRow>& rows, const std::string& channel) {
    for (const NmseRow& row : rows)
      if (row.channel == channel) return row.value;
    throw ConfigError("report is missing channel " + channel);
  };
  for (const char* channel : {"omega", "delta", "E"}) {
    ComparisonRow row;
    row.channel = channel;
    for (const EvalReport& r : reports) {
      row.val_nmse.push_back(find_row(r.validation, channel));
      row.pred_nmse.push_back(find_row(r.prediction, channel));
    }
    row.best = strict_argmin(row.pred_nmse);
    c.rows.push_back(std::move(row));
  }
  if (all_sensitivity) {
    ComparisonRow row;
    row.channel = "sensitivity";
    for (const EvalReport& r : reports) {
      row.val_nmse.push_back(r.sensitivity_nmse);
      row.pred_nmse.push_back(r.sensitivity_nmse);
    }
    row.best = strict_argmin(row.pred_nmse);
    c.rows.push_back(std::move(row));
  }
  return c;
}

void write_comparison_csv(const std::filesystem::path& path, const Comparison& c) {
  std::string text = "state";
  for (const std::string& m : c.models) text += "," + m + "_val," + m + "_pred";
  text += ",best\n";
  for (const ComparisonRow& row : c.rows) {
    text += row.channel;
    for (std::size_t i = 0; i < c.models.size(); ++i)
      text += "," + format_g17(row.val_nmse[i]) + "," + format_g17(row.pred_nmse[i]);
    text += "," + (row.best < 0 ? std::string("tie")
                                : c.models[static_cast<std::size_t>(row.best)]);
    text += "\n";
  }
  write_text_file(path, text);
}

void write_comparison_json(const std::filesystem::path& path, const Comparison& c) {
  json j;
  j["models"] = c.models;
  j["split_hash"] = c.split_hash;
  json rows = json::array();
  for (const ComparisonRow& row : c.rows) {
    json r;
    r["state"] = row.channel;
    for (std::size_t i = 0; i < c.models.size(); ++i) {
      r[c.models[i]]["val_nmse"] = row.val_nmse[i];
      r[c.models[i]]["pred_nmse"] = row.pred_nmse[i];
    }
    r["best"] = row.best < 0 ? json(nullptr)
                             : json(c.models[static_cast<std::size_t>(row.best)]);
    rows.push_back(std::move(r));
  }
  j["rows"] = rows;
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace dynlearn
