#include "dynlearn/nn/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numeric>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {
namespace {

void copy_params(Net& dst, Net& src) {
  dst.set_zero();
  dst.add_scaled(src, 1.0);
}

}  // namespace

TrainResult train(Net& net, const std::vector<Sample>& samples,
                  const Normalizer& norm, const TrainConfig& cfg, ExecMode mode,
                  const std::vector<double>* j_ref) {
  if (samples.empty()) throw ConfigError("cannot train on an empty sample set");
  if (cfg.batch < 1 || cfg.grad_block < 1)
    throw ConfigError("batch and grad_block must be positive");
  if (cfg.lambda_sens > 0.0 && (!j_ref || j_ref->size() != samples.size()))
    throw ConfigError("sensitivity-regularized training needs one reference per sample");

  const auto t_begin = std::chrono::steady_clock::now();
  const std::size_t n = samples.size();

  std::vector<NormWindow> windows(n);
  std::vector<Eigen::Vector3d> targets(n);
  for (std::size_t i = 0; i < n; ++i) {
    windows[i] = normalize_window(samples[i], norm);
    targets[i] = normalize_target(samples[i], norm);
  }
  // Persistent unit set-point change, expressed in normalized inputs.
  NormWindow u_tangent;
  u_tangent.set_zero();
  for (int i = 0; i < kWindow; ++i) u_tangent.u[i][0] = 1.0 / norm.u_std[0];
  const double sigma_omega = norm.x_std[1];

  AdamwConfig opt_cfg;
  opt_cfg.lr = cfg.lr;
  opt_cfg.weight_decay = cfg.weight_decay;
  AdamW opt(net, opt_cfg);

  const int max_blocks =
      static_cast<int>(block_count(static_cast<std::size_t>(cfg.batch),
                                   static_cast<std::size_t>(cfg.grad_block)));
  std::vector<std::unique_ptr<Net>> block_grads;
  for (int b = 0; b < max_blocks; ++b) block_grads.push_back(net.zeros_like());
  std::unique_ptr<Net> total = net.zeros_like();
  std::unique_ptr<Net> best = net.clone();

  TrainResult result;
  result.best_loss = std::numeric_limits<double>::infinity();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  const std::uint64_t shuffle_base = Rng::derive(cfg.seed, "epoch-shuffle");
  int flat_streak = 0;

  for (int epoch = 0; epoch < cfg.max_epochs; ++epoch) {
    Rng rng(shuffle_base ^ static_cast<std::uint64_t>(epoch));
    rng.shuffle(order);

    double loss_sum = 0.0;
    for (std::size_t start = 0, batch_idx = 0; start < n;
         start += static_cast<std::size_t>(cfg.batch), ++batch_idx) {
      const std::size_t b_size =
          std::min<std::size_t>(static_cast<std::size_t>(cfg.batch), n - start);
      const std::size_t n_blocks =
          block_count(b_size, static_cast<std::size_t>(cfg.grad_block));
      std::vector<double> block_loss(n_blocks, 0.0);

      parallel_for(n_blocks, mode, [&](std::size_t blk) {
        Net& g = *block_grads[blk];
        g.set_zero();
        const std::size_t lo = blk * static_cast<std::size_t>(cfg.grad_block);
        const std::size_t hi =
            std::min(lo + static_cast<std::size_t>(cfg.grad_block), b_size);
        for (std::size_t j = lo; j < hi; ++j) {
          const std::size_t s = order[start + j];
          const double inv_b = 1.0 / static_cast<double>(b_size);
          if (cfg.lambda_sens > 0.0) {
            const double ref = (*j_ref)[s];
            net.backward_dual(
                windows[s], u_tangent,
                [&](const Eigen::Vector3d& x_hat, const Eigen::Vector3d& x_dot)
                    -> std::pair<Eigen::Vector3d, Eigen::Vector3d> {
                  const Eigen::Vector3d err = x_hat - targets[s];
                  const double j_hat = sigma_omega * x_dot[1];
                  block_loss[blk] += err.squaredNorm() +
                                     cfg.lambda_sens * (j_hat - ref) * (j_hat - ref);
                  Eigen::Vector3d seed_dot = Eigen::Vector3d::Zero();
                  seed_dot[1] = 2.0 * cfg.lambda_sens * (j_hat - ref) *
                                sigma_omega * inv_b;
                  return {2.0 * inv_b * err, seed_dot};
                },
                g);
          } else {
            const Eigen::Vector3d x_hat = net.forward(windows[s]);
            const Eigen::Vector3d err = x_hat - targets[s];
            block_loss[blk] += err.squaredNorm();
            net.backward(windows[s], 2.0 * inv_b * err, g, nullptr);
          }
        }
      });

      double batch_loss = 0.0;
      total->set_zero();
      for (std::size_t blk = 0; blk < n_blocks; ++blk) {
        batch_loss += block_loss[blk];
        total->add_scaled(*block_grads[blk], 1.0);
      }
      if (!std::isfinite(batch_loss))
        throw TrainingAbort("non-finite loss", epoch, static_cast<int>(batch_idx));
      loss_sum += batch_loss;
      opt.step(net, *total);
    }

    const double epoch_loss = loss_sum / static_cast<double>(n);
    result.epoch_loss.push_back(epoch_loss);
    result.epochs_run = epoch + 1;

    if (epoch_loss < result.best_loss) {
      result.best_loss = epoch_loss;
      result.best_epoch = epoch;
      copy_params(*best, net);
    }
    if (epoch > 0) {
      const double improvement = result.epoch_loss[epoch - 1] - epoch_loss;
      flat_streak = improvement < cfg.tol ? flat_streak + 1 : 0;
      if (flat_streak >= cfg.patience) break;
    }
  }

  copy_params(net, *best);
  result.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_begin)
          .count();
  return result;
}

double mean_loss(Net& net, const std::vector<Sample>& samples,
                 const Normalizer& norm) {
  if (samples.empty()) throw ConfigError("cannot evaluate an empty sample set");
  double sum = 0.0;
  for (const Sample& s : samples) {
    const Eigen::Vector3d err =
        net.forward(normalize_window(s, norm)) - normalize_target(s, norm);
    sum += err.squaredNorm();
  }
  return sum / static_cast<double>(samples.size());
}

}  // namespace dynlearn
