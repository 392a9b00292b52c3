#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "dynlearn/data/dataset.hpp"
#include "dynlearn/models/component.hpp"
#include "dynlearn/nn/train.hpp"
#include "dynlearn/sens/sensitivity.hpp"
#include "dynlearn/sim/scenario.hpp"
#include "dynlearn/support/config.hpp"

namespace dynlearn {

/// One subcommand invocation's worth of configuration, materialized from a
/// preset or config file plus command-line overrides.
struct RunConfig {
  KeyValue kv;
  std::filesystem::path out_root;
  std::string config_hash;
  std::uint64_t seed = 1;

  ComponentModel component;
  NetworkModel net;
  SweepSpec sweep;
  IntegrationMethod method = IntegrationMethod::Rk4;
  ExecMode exec = ExecMode::Parallel;

  std::string model_kind = "sirnn";
  int hidden = 50;
  Activation activation = Activation::Tanh;
  TrainConfig train;
  DatasetConfig data;
  SensitivityConfig sens;
  double sens_duration = 4.0;
  int gradcheck_coords = 100;
  int gradcheck_seeds = 10;

  std::filesystem::path data_dir() const;
  std::filesystem::path checkpoint_dir() const;
  std::filesystem::path report_dir() const;
};

/// Hash of the canonical config text with "paths.*" keys dropped, so artifact
/// chains survive relocating the output tree.
std::string run_config_hash(const KeyValue& kv);

RunConfig make_run_config(const KeyValue& kv,
                          const std::filesystem::path& out_root);

/// Each command writes its artifacts under the config's output root, prints a
/// one-line JSON summary to stdout, and returns a process exit code.
int cmd_simulate(const RunConfig& rc);
int cmd_dataset(const RunConfig& rc);
int cmd_train(const RunConfig& rc);
int cmd_eval(const RunConfig& rc);
int cmd_sensitivity(const RunConfig& rc);
int cmd_gradcheck(const RunConfig& rc);

}  // namespace dynlearn
