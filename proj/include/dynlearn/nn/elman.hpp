#pragma once

#include "dynlearn/nn/net.hpp"

namespace dynlearn {

/// Plain recurrent baseline with tied weights and an affine readout of the
/// final hidden state. Depth selects how many of the newest window frames are
/// consumed (1 or kWindow); the hidden state starts at zero per window.
class Elman : public Net {
 public:
  Elman(int hidden, Activation act, int depth);

  std::string kind() const override { return depth_ == 1 ? "rnn1" : "rnn4"; }
  int hidden() const override { return hidden_; }
  Activation activation() const override { return act_; }
  int depth() const { return depth_; }

  std::unique_ptr<Net> clone() const override;
  void visit(const TensorVisitor& fn) override;
  void init_params(Rng& rng) override;

  Eigen::Vector3d forward(const NormWindow& w) const override;
  void backward(const NormWindow& w, const Eigen::Vector3d& seed, Net& grads,
                NormWindow* input_grads) const override;

 private:
  int hidden_;
  Activation act_;
  int depth_;

 public:
  Eigen::MatrixXd W_xh, W_yh, W_uh, W_hh;
  Eigen::VectorXd b_h;
  Eigen::MatrixXd W_out;
  Eigen::VectorXd b_out;
};

}  // namespace dynlearn
