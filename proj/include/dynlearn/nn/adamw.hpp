#pragma once

#include "dynlearn/nn/net.hpp"

namespace dynlearn {

struct AdamwConfig {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 1e-4;  ///< decoupled: applied directly to parameters
};

/// Adam with decoupled weight decay. Moment vectors are laid out flat in the
/// model's canonical tensor order.
class AdamW {
 public:
  AdamW(Net& net, const AdamwConfig& cfg);

  void step(Net& params, Net& grads);

 private:
  AdamwConfig cfg_;
  Eigen::VectorXd m_, v_;
  long long t_ = 0;
};

}  // namespace dynlearn
