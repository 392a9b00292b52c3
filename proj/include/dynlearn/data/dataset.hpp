#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dynlearn/sim/scenario.hpp"

namespace dynlearn {

inline constexpr int kWindow = 4;  ///< frames per training window

/// One recorded sample: reduced state, terminal phasor, set-points.
struct Frame {
  Eigen::Vector3d x;  ///< delta, omega, E
  Eigen::Vector2d y;  ///< V, theta
  Eigen::Vector2d u;  ///< P_star, aux
};

/// Supervised pair: a window of consecutive frames and the reduced state one
/// step past the window.
struct Sample {
  std::array<Frame, kWindow> window;  ///< window[0] is the oldest frame
  Eigen::Vector3d target;
  int scenario_id = -1;
  long long target_index = -1;  ///< row of the target within its trajectory
};

/// Per-channel affine normalization fitted on training window frames.
/// Targets share the state statistics. Degenerate channels keep scale 1.
struct Normalizer {
  Eigen::Vector3d x_mean = Eigen::Vector3d::Zero();
  Eigen::Vector3d x_std = Eigen::Vector3d::Ones();
  Eigen::Vector2d y_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d y_std = Eigen::Vector2d::Ones();
  Eigen::Vector2d u_mean = Eigen::Vector2d::Zero();
  Eigen::Vector2d u_std = Eigen::Vector2d::Ones();
  /// Raw-unit state envelope of the training data, for rollout divergence.
  Eigen::Vector3d x_min = Eigen::Vector3d::Zero();
  Eigen::Vector3d x_max = Eigen::Vector3d::Zero();

  static Normalizer fit(const std::vector<Sample>& train);

  Eigen::Vector3d norm_x(const Eigen::Vector3d& v) const;
  Eigen::Vector3d denorm_x(const Eigen::Vector3d& v) const;
  Eigen::Vector2d norm_y(const Eigen::Vector2d& v) const;
  Eigen::Vector2d norm_u(const Eigen::Vector2d& v) const;
};

struct DatasetConfig {
  double test_fraction = 0.1;
  std::uint64_t split_seed = 1;
};

/// Scenario-level split: whole trajectories land in train or test, so test
/// rollouts never overlap training windows.
struct Dataset {
  std::vector<Sample> train;
  std::vector<Sample> test;
  std::vector<int> train_ids;  ///< ascending scenario ids
  std::vector<int> test_ids;
  std::vector<long long> counts_per_scenario;  ///< aligned with input order
  Normalizer norm;
  DatasetConfig config;
  std::string hash_hex;  ///< content hash of the canonical manifest
  std::string config_hash;  ///< producing run's config hash, manifest metadata
};

/// Sliding windows over one trajectory; a trajectory of T rows yields
/// T - kWindow samples. Throws when the trajectory is too short to hold a
/// single window plus target.
std::vector<Sample> windows_from_trajectory(const Trajectory& traj);

/// Splits scenarios (shuffle by seed, round(test_fraction * n) to test),
/// materializes windows in ascending scenario-id order per split, and fits the
/// normalizer on the training windows.
Dataset build_dataset(const std::vector<Trajectory>& trajectories,
                      const DatasetConfig& cfg);

/// Canonical manifest (sorted keys, exact doubles); hash_hex covers the text
/// with the hash field blank.
std::string dataset_manifest_text(const Dataset& ds);

void write_dataset(const std::filesystem::path& dir,
                   const std::vector<Trajectory>& trajectories,
                   const Dataset& ds);
/// Rebuilds the dataset from manifest + trajectory files; verifies the
/// recomputed manifest hash matches the stored one.
Dataset read_dataset(const std::filesystem::path& dir,
                     std::vector<Trajectory>* trajectories_out = nullptr);

}  // namespace dynlearn
