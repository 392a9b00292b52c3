#pragma once

#include <cstdint>
#include <vector>

#include "dynlearn/nn/adamw.hpp"
#include "dynlearn/nn/net.hpp"
#include "dynlearn/support/parallel.hpp"

namespace dynlearn {

struct TrainConfig {
  int batch = 64;
  int max_epochs = 500;
  double lr = 1e-3;
  double weight_decay = 1e-4;
  /// Epoch-loss improvements below tol for `patience` consecutive epochs end
  /// training early.
  double tol = 1e-7;
  int patience = 5;
  std::uint64_t seed = 1;
  /// Weight of the squared mismatch between the model's set-point directional
  /// derivative and a per-sample reference (0 disables the term).
  double lambda_sens = 0.0;
  /// Samples per gradient block; partial gradients are accumulated per block
  /// and reduced in block order, so results do not depend on thread count.
  int grad_block = 32;
};

struct TrainResult {
  std::vector<double> epoch_loss;  ///< mean per-sample loss per epoch
  int best_epoch = -1;
  double best_loss = 0.0;
  int epochs_run = 0;
  double wall_seconds = 0.0;  ///< informational; keep out of hashed artifacts
};

/// Minibatch AdamW on mean squared one-step error (plus the optional
/// directional-derivative penalty). Leaves the best-epoch parameters in
/// `net`. `j_ref` must align with `samples` when lambda_sens > 0.
TrainResult train(Net& net, const std::vector<Sample>& samples,
                  const Normalizer& norm, const TrainConfig& cfg, ExecMode mode,
                  const std::vector<double>* j_ref = nullptr);

/// Mean per-sample squared one-step error of the current parameters.
double mean_loss(Net& net, const std::vector<Sample>& samples,
                 const Normalizer& norm);

}  // namespace dynlearn
