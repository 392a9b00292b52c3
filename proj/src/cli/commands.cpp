#include "dynlearn/cli/commands.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <optional>
#include <vector>

#include <json.hpp>

#include "dynlearn/eval/evaluate.hpp"
#include "dynlearn/nn/checkpoint.hpp"
#include "dynlearn/support/csv.hpp"
#include "dynlearn/support/errors.hpp"
#include "dynlearn/support/hash.hpp"

namespace dynlearn {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

void emit_summary(const json& j) { std::cout << j.dump() << std::endl; }

fs::path checkpoint_path(const RunConfig& rc) {
  return rc.checkpoint_dir() / ("checkpoint_" + rc.model_kind + ".json");
}

/// Hash of the keys that determine simulated data, so downstream stages can
/// verify provenance without pinning unrelated settings (model, optimizer).
std::string data_config_hash(const KeyValue& kv) {
  KeyValue filtered;
  for (const char* prefix : {"component.", "network.", "sweep."})
    for (const auto& key : kv.keys_with_prefix(prefix))
      filtered.set(key, kv.str(key));
  return filtered.hash_hex();
}

/// Constant-set-point, fault-free scenario used for sensitivity runs.
Scenario sensitivity_scenario(const RunConfig& rc) {
  Scenario s;
  s.id = 0;
  s.base = rc.sweep.base;
  s.fault.cycles = 0;
  s.duration = rc.sens_duration;
  s.sim_rate = rc.sweep.sim_rate;
  s.output_rate = rc.sweep.output_rate;
  s.smooth_window = rc.sweep.smooth_window;
  return s;
}

}  // namespace

fs::path RunConfig::data_dir() const {
  return out_root / kv.str_or("paths.data_dir", "data");
}
fs::path RunConfig::checkpoint_dir() const {
  return out_root / kv.str_or("paths.checkpoint_dir", "checkpoints");
}
fs::path RunConfig::report_dir() const {
  return out_root / kv.str_or("paths.report_dir", "reports");
}

std::string run_config_hash(const KeyValue& kv) {
  KeyValue filtered;
  for (const auto& [key, value] : kv.entries())
    if (key.rfind("paths.", 0) != 0) filtered.set(key, value);
  return filtered.hash_hex();
}

RunConfig make_run_config(const KeyValue& kv, const fs::path& out_root) {
  RunConfig rc;
  rc.kv = kv;
  rc.out_root = out_root;
  rc.config_hash = run_config_hash(kv);
  rc.seed = kv.u64_or("run.seed", 1);

  rc.component = ComponentModel::from_config(kv, "component");
  rc.net = NetworkModel::from_config(kv, "network");

  rc.sweep.locations = static_cast<int>(kv.i64("sweep.locations"));
  rc.sweep.sites = static_cast<int>(kv.i64("sweep.sites"));
  for (long long c : kv.i64_list("sweep.durations"))
    rc.sweep.durations.push_back(static_cast<int>(c));
  rc.sweep.dp_star = kv.f64_list("sweep.dp_star");
  rc.sweep.step_delay = kv.f64("sweep.step_delay");
  rc.sweep.count = static_cast<int>(kv.i64_or("sweep.count", -1));
  rc.sweep.f_nominal = rc.component.f_nominal();
  rc.sweep.fault_t_start = kv.f64("sweep.fault_t_start");
  rc.sweep.x_fault = kv.f64("sweep.x_fault");
  rc.sweep.duration = kv.f64("sweep.duration");
  rc.sweep.sim_rate = static_cast<int>(kv.i64("sweep.sim_rate"));
  rc.sweep.output_rate = static_cast<int>(kv.i64("sweep.output_rate"));
  rc.sweep.smooth_window = static_cast<int>(kv.i64("sweep.smooth_window"));
  rc.sweep.base = {kv.f64("sweep.base_p_star"), kv.f64("sweep.base_aux")};

  rc.method = integration_method_from_string(kv.str_or("run.method", "rk4"));
  rc.exec = kv.flag_or("run.parallel", true) ? ExecMode::Parallel : ExecMode::Serial;

  rc.model_kind = kv.str_or("run.model", "sirnn");
  rc.hidden = static_cast<int>(kv.i64_or("run.hidden", 50));
  rc.activation = activation_from_string(kv.str_or("run.activation", "tanh"));

  rc.train.batch = static_cast<int>(kv.i64_or("train.batch", 256));
  rc.train.max_epochs = static_cast<int>(kv.i64("train.epochs"));
  rc.train.lr = kv.f64_or("train.lr", 1e-3);
  rc.train.weight_decay = kv.f64_or("train.weight_decay", 1e-4);
  rc.train.tol = kv.f64_or("train.tol", 1e-7);
  rc.train.patience = static_cast<int>(kv.i64_or("train.patience", 5));
  rc.train.seed = rc.seed;
  rc.train.lambda_sens = kv.f64_or("train.lambda_sens", 0.0);
  rc.train.grad_block = static_cast<int>(kv.i64_or("train.grad_block", 32));

  rc.data.test_fraction = kv.f64_or("train.test_fraction", 0.1);
  rc.data.split_seed = rc.seed;

  rc.sens.t_perturb = kv.f64_or("sensitivity.t_perturb", 1.0);
  rc.sens.eps = kv.f64_or("sensitivity.eps", 1e-3);
  rc.sens_duration = kv.f64_or("sensitivity.duration", 4.0);

  rc.gradcheck_coords = static_cast<int>(kv.i64_or("gradcheck.coords", 100));
  rc.gradcheck_seeds = static_cast<int>(kv.i64_or("gradcheck.seeds", 10));
  return rc;
}

int cmd_simulate(const RunConfig& rc) {
  const std::vector<Scenario> scenarios = generate_scenarios(rc.sweep);
  const SimBatchResult batch =
      simulate_batch(rc.component, rc.net, scenarios, rc.method, rc.exec);

  fs::create_directories(rc.data_dir());
  json entries = json::array();
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    json e;
    e["id"] = scenarios[i].id;
    if (batch.trajectories[i]) {
      const std::string file =
          "scenario_" + std::to_string(scenarios[i].id) + ".csv";
      write_trajectory_csv(rc.data_dir() / file, *batch.trajectories[i]);
      e["file"] = file;
      e["rows"] = batch.trajectories[i]->size();
    } else {
      e["diverged"] = true;
    }
    entries.push_back(e);
  }
  json manifest;
  manifest["config_hash"] = rc.config_hash;
  manifest["data_hash"] = data_config_hash(rc.kv);
  manifest["component"] = to_string(rc.component.kind());
  manifest["scenarios"] = entries;
  manifest["diverged_ids"] = batch.diverged_ids;
  write_text_file(rc.data_dir() / "sim_manifest.json", manifest.dump(2) + "\n");

  emit_summary({{"command", "simulate"},
                {"scenarios", scenarios.size()},
                {"diverged", batch.diverged_ids.size()},
                {"config_hash", rc.config_hash},
                {"out", rc.data_dir().string()}});
  return 0;
}

int cmd_dataset(const RunConfig& rc) {
  const json manifest =
      json::parse(read_text_file(rc.data_dir() / "sim_manifest.json"));
  const std::string want = data_config_hash(rc.kv);
  if (manifest.at("data_hash").get<std::string>() != want)
    throw HashMismatchError(
        "hash mismatch: simulation manifest was produced under data config " +
        manifest.at("data_hash").get<std::string>() + ", current data config is " +
        want);

  std::vector<Trajectory> trajectories;
  for (const json& e : manifest.at("scenarios")) {
    if (!e.contains("file")) continue;  // diverged during simulation
    Trajectory tr =
        read_trajectory_csv(rc.data_dir() / e.at("file").get<std::string>());
    tr.meta.id = e.at("id").get<int>();
    tr.meta.kind = rc.component.kind();
    trajectories.push_back(std::move(tr));
  }
  Dataset ds = build_dataset(trajectories, rc.data);
  ds.config_hash = rc.config_hash;
  write_dataset(rc.data_dir(), trajectories, ds);

  emit_summary({{"command", "dataset"},
                {"train_scenarios", ds.train_ids.size()},
                {"test_scenarios", ds.test_ids.size()},
                {"train_samples", ds.train.size()},
                {"test_samples", ds.test.size()},
                {"dataset_hash", ds.hash_hex},
                {"config_hash", rc.config_hash}});
  return 0;
}

int cmd_train(const RunConfig& rc) {
  const Dataset ds = read_dataset(rc.data_dir());
  std::unique_ptr<Net> net = make_net(rc.model_kind, rc.hidden, rc.activation);
  Rng rng(Rng::derive(rc.seed, "init"));
  net->init_params(rng);

  const TrainResult res = train(*net, ds.train, ds.norm, rc.train, rc.exec);

  fs::create_directories(rc.checkpoint_dir());
  const std::string checkpoint_id = save_checkpoint(
      checkpoint_path(rc), *net, ds.norm, ds.hash_hex, rc.config_hash);

  std::string curve = "epoch,loss\n";
  for (std::size_t i = 0; i < res.epoch_loss.size(); ++i)
    curve += std::to_string(i) + "," + format_g17(res.epoch_loss[i]) + "\n";
  write_text_file(rc.checkpoint_dir() / ("loss_" + rc.model_kind + ".csv"), curve);

  json report;
  report["model"] = rc.model_kind;
  report["hidden"] = rc.hidden;
  report["epochs_run"] = res.epochs_run;
  report["best_epoch"] = res.best_epoch;
  report["best_loss"] = res.best_loss;
  report["wall_seconds"] = res.wall_seconds;  // informational, not hashed
  report["config_hash"] = rc.config_hash;
  report["dataset_hash"] = ds.hash_hex;
  report["checkpoint_id"] = checkpoint_id;
  write_text_file(rc.checkpoint_dir() / ("train_report_" + rc.model_kind + ".json"),
                  report.dump(2) + "\n");

  emit_summary({{"command", "train"},
                {"model", rc.model_kind},
                {"epochs_run", res.epochs_run},
                {"best_epoch", res.best_epoch},
                {"best_loss", res.best_loss},
                {"checkpoint_id", checkpoint_id},
                {"dataset_hash", ds.hash_hex},
                {"config_hash", rc.config_hash}});
  return 0;
}

int cmd_eval(const RunConfig& rc) {
  std::vector<Trajectory> trajectories;
  const Dataset ds = read_dataset(rc.data_dir(), &trajectories);
  const Checkpoint ck = load_checkpoint(checkpoint_path(rc));
  if (ck.dataset_hash != ds.hash_hex)
    throw HashMismatchError("hash mismatch: checkpoint was trained on dataset " +
                            ck.dataset_hash + ", current dataset is " +
                            ds.hash_hex);

  EvalReport report = evaluate_model(*ck.net, ds, trajectories);
  report.dataset_hash = ds.hash_hex;
  report.config_hash = ck.config_hash;
  report.checkpoint_id = ck.checkpoint_id;

  fs::create_directories(rc.report_dir());
  write_eval_report(rc.report_dir() / ("eval_" + rc.model_kind + ".json"), report);

  // Refresh the side-by-side table whenever reports for several models share
  // this split. File order keeps the table stable across reruns.
  std::vector<EvalReport> peers;
  std::vector<fs::path> peer_paths;
  for (const auto& entry : fs::directory_iterator(rc.report_dir())) {
    const std::string name = entry.path().filename().string();
    if (name.rfind("eval_", 0) == 0 && entry.path().extension() == ".json")
      peer_paths.push_back(entry.path());
  }
  std::sort(peer_paths.begin(), peer_paths.end());
  for (const fs::path& p : peer_paths) {
    EvalReport peer = read_eval_report(p);
    if (peer.dataset_hash == ds.hash_hex) peers.push_back(std::move(peer));
  }
  if (peers.size() >= 2) {
    const Comparison table = compare_models(peers);
    write_comparison_csv(rc.report_dir() / "comparison.csv", table);
    write_comparison_json(rc.report_dir() / "comparison.json", table);
  }

  json nmse;
  for (const NmseRow& r : report.validation) nmse["val_" + r.channel] = r.value;
  for (const NmseRow& r : report.prediction) nmse["pred_" + r.channel] = r.value;
  emit_summary({{"command", "eval"},
                {"model", report.model_kind},
                {"nmse", nmse},
                {"diverged", report.diverged_ids},
                {"one_step_not_worse", one_step_not_worse(report)},
                {"dataset_hash", ds.hash_hex},
                {"config_hash", rc.config_hash}});
  return 0;
}

int cmd_sensitivity(const RunConfig& rc) {
  const Scenario scenario = sensitivity_scenario(rc);
  const SimSensitivity sim =
      fd_sensitivity_sim(rc.component, rc.net, scenario, rc.method, rc.sens);

  const long long k_p =
      std::llround(rc.sens.t_perturb * scenario.output_rate);
  double pre_step_max = 0.0;
  for (long long i = 0; i < k_p && i < static_cast<long long>(sim.j_omega.size()); ++i)
    pre_step_max = std::max(pre_step_max, std::abs(sim.j_omega[i]));

  fs::create_directories(rc.report_dir());
  std::string csv = "t,J,source\n";
  for (std::size_t i = 0; i < sim.t.size(); ++i)
    csv += format_g17(sim.t[i]) + "," + format_g17(sim.j_omega[i]) + ",SimFD\n";
  write_text_file(rc.report_dir() / "sensitivity.csv", csv);

  json summary;
  summary["command"] = "sensitivity";
  summary["t_perturb"] = rc.sens.t_perturb;
  summary["eps"] = rc.sens.eps;
  summary["pre_step_max_abs_j"] = pre_step_max;
  summary["j_end_abs"] = std::abs(sim.j_omega.back());
  summary["config_hash"] = rc.config_hash;

  // Compare the learned model's rollout sensitivity when a matching
  // checkpoint and dataset exist.
  if (fs::exists(checkpoint_path(rc))) {
    const Checkpoint ck = load_checkpoint(checkpoint_path(rc));
    const fs::path manifest_path = rc.data_dir() / "manifest.json";
    if (fs::exists(manifest_path)) {
      const json m = json::parse(read_text_file(manifest_path));
      if (m.at("hash").get<std::string>() != ck.dataset_hash)
        throw HashMismatchError(
            "hash mismatch: checkpoint was trained on dataset " +
            ck.dataset_hash + ", data directory holds " +
            m.at("hash").get<std::string>());
    }
    const RolloutSensitivity rs =
        rollout_sensitivity(*ck.net, sim.base, ck.norm, k_p);
    std::string mcsv = "t,J,source\n";
    for (std::size_t i = 0; i < rs.t.size(); ++i)
      mcsv += format_g17(rs.t[i]) + "," + format_g17(rs.j_omega[i]) +
              ",ModelAnalytic\n";
    write_text_file(rc.report_dir() / "sensitivity_model.csv", mcsv);
    summary["model"] = ck.net->kind();
    summary["model_diverged"] = rs.diverged;
    if (!rs.diverged)
      summary["model_nmse"] = evaluate_sensitivity(*ck.net, sim, ck.norm, k_p);
  }

  write_text_file(rc.report_dir() / "sensitivity.json", summary.dump(2) + "\n");
  emit_summary(summary);
  return 0;
}

int cmd_gradcheck(const RunConfig& rc) {
  double max_rel_err = 0.0;
  for (int s = 0; s < rc.gradcheck_seeds; ++s) {
    Rng rng(Rng::derive(rc.seed, "gradcheck") ^ static_cast<std::uint64_t>(s));
    std::unique_ptr<Net> net = make_net(rc.model_kind, rc.hidden, rc.activation);
    net->init_params(rng);

    NormWindow w;
    auto fill = [&](auto& arr) {
      for (auto& v : arr)
        for (long long i = 0; i < v.size(); ++i)
          v[static_cast<int>(i)] = 2.0 * rng.uniform01() - 1.0;
    };
    fill(w.x);
    fill(w.y);
    fill(w.u);
    Eigen::Vector3d target;
    for (int i = 0; i < 3; ++i) target[i] = 2.0 * rng.uniform01() - 1.0;

    auto loss = [&]() {
      const Eigen::Vector3d err = net->forward(w) - target;
      return err.squaredNorm();
    };
    std::unique_ptr<Net> grads = net->zeros_like();
    const Eigen::Vector3d seed_vec = 2.0 * (net->forward(w) - target);
    net->backward(w, seed_vec, *grads, nullptr);

    std::vector<TensorRef> param_refs, grad_refs;
    net->visit([&](const TensorRef& t) { param_refs.push_back(t); });
    grads->visit([&](const TensorRef& t) { grad_refs.push_back(t); });
    long long total = 0;
    for (const TensorRef& t : param_refs) total += t.size();

    for (int c = 0; c < rc.gradcheck_coords; ++c) {
      long long flat = static_cast<long long>(
          rng.index(static_cast<std::size_t>(total)));
      std::size_t ti = 0;
      while (flat >= param_refs[ti].size()) flat -= param_refs[ti++].size();
      double& theta = param_refs[ti].data[flat];
      const double analytic = grad_refs[ti].data[flat];

      const double h = 1e-6 * std::max(1.0, std::abs(theta));
      const double saved = theta;
      theta = saved + h;
      const double lp = loss();
      theta = saved - h;
      const double lm = loss();
      theta = saved;
      const double fd = (lp - lm) / (2.0 * h);
      const double rel =
          std::abs(analytic - fd) / std::max(std::abs(analytic) + std::abs(fd), 1e-8);
      max_rel_err = std::max(max_rel_err, rel);
    }
  }
  const bool pass = max_rel_err < 1e-5;

  fs::create_directories(rc.report_dir());
  json report;
  report["command"] = "gradcheck";
  report["model"] = rc.model_kind;
  report["coords"] = rc.gradcheck_coords;
  report["seeds"] = rc.gradcheck_seeds;
  report["max_rel_err"] = max_rel_err;
  report["pass"] = pass;
  report["config_hash"] = rc.config_hash;
  write_text_file(rc.report_dir() / "gradcheck.json", report.dump(2) + "\n");
  emit_summary(report);
  return pass ? 0 : 1;
}

}  // namespace dynlearn
