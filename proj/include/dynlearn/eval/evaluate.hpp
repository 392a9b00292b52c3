#pragma once

#include <filesystem>

#include "dynlearn/sens/sensitivity.hpp"

namespace dynlearn {

/// Closed-loop rollout: the first kWindow state rows come from data, later
/// windows feed predictions back; terminal voltage and set-points stay data.
/// Stops early when a prediction leaves the training envelope by more than
/// ten times the per-channel training range.
struct Rollout {
  std::vector<Eigen::Vector3d> pred;  ///< physical, aligned with rows kWindow..
  bool diverged = false;
};

Rollout rollout(const Net& net, const Trajectory& traj, const Normalizer& norm);

struct NmseRow {
  std::string channel;
  double value;
};

/// Normalized error pooled by concatenating every sample of a channel:
/// ||x - x_hat||_2 / ||x||_2 in physical units.
struct EvalReport {
  std::string model_kind;
  std::vector<NmseRow> validation;  ///< one-step, rows omega, delta, E
  std::vector<NmseRow> prediction;  ///< rollout, same rows
  std::vector<int> diverged_ids;    ///< test scenarios excluded from pooling
  bool has_sensitivity = false;
  double sensitivity_nmse = 0.0;
  std::string dataset_hash;
  std::string config_hash;
  std::string checkpoint_id;
};

EvalReport evaluate_model(const Net& net, const Dataset& ds,
                          const std::vector<Trajectory>& trajectories);

/// Rollout-sensitivity error against the simulated reference, pooled over the
/// predicted rows.
double evaluate_sensitivity(const Net& net, const SimSensitivity& reference,
                            const Normalizer& norm, long long perturb_row);

/// Rollout error compounds, so per channel the one-step error should not
/// exceed it: passes with 5% slack, or when both are below 0.02.
bool one_step_not_worse(const EvalReport& report);

void write_eval_report(const std::filesystem::path& path, const EvalReport& report);

/// Parses a report written by write_eval_report.
EvalReport read_eval_report(const std::filesystem::path& path);

/// One channel of the side-by-side table: NMSE pairs in model order, plus the
/// index of the strictly lowest prediction error (-1 on a tie).
struct ComparisonRow {
  std::string channel;
  std::vector<double> val_nmse;
  std::vector<double> pred_nmse;
  int best = -1;
};

struct Comparison {
  std::vector<std::string> models;
  std::string split_hash;
  std::vector<ComparisonRow> rows;  ///< omega, delta, E, then sensitivity
};

/// Side-by-side per-channel errors for two or more reports evaluated on the
/// same split; reports with differing split hashes cannot be compared. The
/// sensitivity row appears only when every report carries the metric.
Comparison compare_models(const std::vector<EvalReport>& reports);

void write_comparison_csv(const std::filesystem::path& path, const Comparison& c);
void write_comparison_json(const std::filesystem::path& path, const Comparison& c);

}  // namespace dynlearn
