#include "dynlearn/data/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "dynlearn/support/csv.hpp"
#include "dynlearn/support/errors.hpp"
#include "dynlearn/support/hash.hpp"
#include "dynlearn/support/rng.hpp"

namespace dynlearn {
namespace {

using nlohmann::json;

json vec_to_json(const Eigen::VectorXd& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

json manifest_json(const Dataset& ds, const std::string& hash_field) {
  json m;
  m["hash"] = hash_field;
  m["split_seed"] = ds.config.split_seed;
  m["test_fraction"] = ds.config.test_fraction;
  m["train_ids"] = ds.train_ids;
  m["test_ids"] = ds.test_ids;
  m["train_samples"] = ds.train.size();
  m["test_samples"] = ds.test.size();
  // Window counts aligned with the input trajectory order.
  m["counts"] = ds.counts_per_scenario;
  json norm;
  norm["x_mean"] = vec_to_json(ds.norm.x_mean);
  norm["x_std"] = vec_to_json(ds.norm.x_std);
  norm["x_min"] = vec_to_json(ds.norm.x_min);
  norm["x_max"] = vec_to_json(ds.norm.x_max);
  norm["y_mean"] = vec_to_json(ds.norm.y_mean);
  norm["y_std"] = vec_to_json(ds.norm.y_std);
  norm["u_mean"] = vec_to_json(ds.norm.u_mean);
  norm["u_std"] = vec_to_json(ds.norm.u_std);
  m["normalizer"] = norm;
  return m;
}

}  // namespace

Normalizer Normalizer::fit(const std::vector<Sample>& train) {
  if (train.empty()) throw ConfigError("cannot fit a normalizer on no samples");
  const double n = static_cast<double>(train.size() * kWindow);

  Eigen::Vector3d x_sum = Eigen::Vector3d::Zero();
  Eigen::Vector2d y_sum = Eigen::Vector2d::Zero();
  Eigen::Vector2d u_sum = Eigen::Vector2d::Zero();
  Normalizer out;
  out.x_min = train.front().window.front().x;
  out.x_max = train.front().window.front().x;
  for (const Sample& s : train) {
    for (const Frame& f : s.window) {
      x_sum += f.x;
      y_sum += f.y;
      u_sum += f.u;
      out.x_min = out.x_min.cwiseMin(f.x);
      out.x_max = out.x_max.cwiseMax(f.x);
    }
  }
  out.x_mean = x_sum / n;
  out.y_mean = y_sum / n;
  out.u_mean = u_sum / n;

  Eigen::Vector3d x_acc = Eigen::Vector3d::Zero();
  Eigen::Vector2d y_acc = Eigen::Vector2d::Zero();
  Eigen::Vector2d u_acc = Eigen::Vector2d::Zero();
  for (const Sample& s : train) {
    for (const Frame& f : s.window) {
      x_acc += (f.x - out.x_mean).cwiseAbs2();
      y_acc += (f.y - out.y_mean).cwiseAbs2();
      u_acc += (f.u - out.u_mean).cwiseAbs2();
    }
  }
  auto finish = [&](auto acc) {
    auto std = decltype(acc)((acc / n).cwiseSqrt());
    for (Eigen::Index i = 0; i < std.size(); ++i)
      if (!(std[i] > 1e-12)) std[i] = 1.0;  // constant channel: identity scale
    return std;
  };
  out.x_std = finish(x_acc);
  out.y_std = finish(y_acc);
  out.u_std = finish(u_acc);
  return out;
}

Eigen::Vector3d Normalizer::norm_x(const Eigen::Vector3d& v) const {
  return (v - x_mean).cwiseQuotient(x_std);
}
Eigen::Vector3d Normalizer::denorm_x(const Eigen::Vector3d& v) const {
  return v.cwiseProduct(x_std) + x_mean;
}
Eigen::Vector2d Normalizer::norm_y(const Eigen::Vector2d& v) const {
  return (v - y_mean).cwiseQuotient(y_std);
}
Eigen::Vector2d Normalizer::norm_u(const Eigen::Vector2d& v) const {
  return (v - u_mean).cwiseQuotient(u_std);
}

std::vector<Sample> windows_from_trajectory(const Trajectory& traj) {
  std::vector<Sample> out;
  const long long t_len = static_cast<long long>(traj.size());
  if (t_len <= kWindow)
    throw ConfigError("trajectory too short to window: need at least " +
                      std::to_string(kWindow + 1) + " rows, got " +
                      std::to_string(t_len));
  out.reserve(static_cast<std::size_t>(t_len - kWindow));
  for (long long j = 0; j + kWindow < t_len; ++j) {
    Sample s;
    for (int w = 0; w < kWindow; ++w) {
      const std::size_t i = static_cast<std::size_t>(j + w);
      s.window[static_cast<std::size_t>(w)] =
          Frame{{traj.x[i].delta, traj.x[i].omega, traj.x[i].e},
                {traj.y[i].v, traj.y[i].theta},
                {traj.u[i].p_star, traj.u[i].aux}};
    }
    const std::size_t it = static_cast<std::size_t>(j + kWindow);
    s.target = {traj.x[it].delta, traj.x[it].omega, traj.x[it].e};
    s.scenario_id = traj.meta.id;
    s.target_index = static_cast<long long>(it);
    out.push_back(std::move(s));
  }
  return out;
}

Dataset build_dataset(const std::vector<Trajectory>& trajectories,
                      const DatasetConfig& cfg) {
  if (trajectories.size() < 2)
    throw ConfigError("dataset split needs at least two scenarios");
  if (cfg.test_fraction < 0.0 || cfg.test_fraction > 1.0)
    throw ConfigError("test_fraction must lie in [0, 1]");

  const std::size_t n = trajectories.size();
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  Rng rng(cfg.split_seed);
  rng.shuffle(perm);
  const auto n_test = static_cast<std::size_t>(
      std::llround(cfg.test_fraction * static_cast<double>(n)));
  if (n_test >= n && cfg.test_fraction < 1.0)
    throw ConfigError("test split would leave no training trajectories");

  std::vector<std::size_t> test_idx(perm.begin(),
                                    perm.begin() + static_cast<long>(n_test));
  std::vector<std::size_t> train_idx(perm.begin() + static_cast<long>(n_test),
                                     perm.end());
  auto by_id = [&](std::size_t a, std::size_t b) {
    return trajectories[a].meta.id < trajectories[b].meta.id;
  };
  std::sort(test_idx.begin(), test_idx.end(), by_id);
  std::sort(train_idx.begin(), train_idx.end(), by_id);

  Dataset ds;
  ds.config = cfg;
  ds.counts_per_scenario.reserve(n);
  for (const Trajectory& traj : trajectories)
    ds.counts_per_scenario.push_back(
        std::max<long long>(0, static_cast<long long>(traj.size()) - kWindow));
  for (std::size_t i : train_idx) {
    ds.train_ids.push_back(trajectories[i].meta.id);
    auto samples = windows_from_trajectory(trajectories[i]);
    ds.train.insert(ds.train.end(), samples.begin(), samples.end());
  }
  for (std::size_t i : test_idx) {
    ds.test_ids.push_back(trajectories[i].meta.id);
    auto samples = windows_from_trajectory(trajectories[i]);
    ds.test.insert(ds.test.end(), samples.begin(), samples.end());
  }
  ds.norm = Normalizer::fit(ds.train);
  ds.hash_hex = hash_hex(dataset_manifest_text(ds));
  return ds;
}

std::string dataset_manifest_text(const Dataset& ds) {
  return manifest_json(ds, "").dump(2);
}

void write_dataset(const std::filesystem::path& dir,
                   const std::vector<Trajectory>& trajectories,
                   const Dataset& ds) {
  std::filesystem::create_directories(dir);
  json m = manifest_json(ds, ds.hash_hex);
  m["config_hash"] = ds.config_hash;
  json order = json::array();
  json files = json::array();
  for (const Trajectory& traj : trajectories) {
    order.push_back(traj.meta.id);
    files.push_back("scenario_" + std::to_string(traj.meta.id) + ".csv");
  }
  m["scenario_order"] = order;
  m["files"] = files;
  write_text_file(dir / "manifest.json", m.dump(2) + "\n");
  for (const Trajectory& traj : trajectories)
    write_trajectory_csv(
        dir / ("scenario_" + std::to_string(traj.meta.id) + ".csv"), traj);
}

Dataset read_dataset(const std::filesystem::path& dir,
                     std::vector<Trajectory>* trajectories_out) {
  const json m = json::parse(read_text_file(dir / "manifest.json"));
  DatasetConfig cfg;
  cfg.split_seed = m.at("split_seed").get<std::uint64_t>();
  cfg.test_fraction = m.at("test_fraction").get<double>();

  std::vector<Trajectory> trajectories;
  for (const auto& id_json : m.at("scenario_order")) {
    const int id = id_json.get<int>();
    Trajectory traj =
        read_trajectory_csv(dir / ("scenario_" + std::to_string(id) + ".csv"));
    traj.meta.id = id;
    trajectories.push_back(std::move(traj));
  }

  Dataset ds = build_dataset(trajectories, cfg);
  if (m.contains("config_hash"))
    ds.config_hash = m.at("config_hash").get<std::string>();
  const std::string stored = m.at("hash").get<std::string>();
  if (ds.hash_hex != stored)
    throw HashMismatchError("dataset manifest hash mismatch: stored " + stored +
                            ", recomputed " + ds.hash_hex);
  if (trajectories_out) *trajectories_out = std::move(trajectories);
  return ds;
}

}  // namespace dynlearn
