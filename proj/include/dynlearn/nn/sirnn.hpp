#pragma once

#include <array>

#include "dynlearn/nn/net.hpp"

namespace dynlearn {

/// Stable integral recurrent network: one recurrent cell per window position
/// with untied weights, a per-stage readout k_i, and an affine combination of
/// the four readouts. The structure mirrors a four-stage explicit integrator:
/// each stage refines the state estimate from the frames seen so far.
class Sirnn : public Net {
 public:
  Sirnn(int hidden, Activation act);

  std::string kind() const override { return "sirnn"; }
  int hidden() const override { return hidden_; }
  Activation activation() const override { return act_; }

  std::unique_ptr<Net> clone() const override;
  void visit(const TensorVisitor& fn) override;
  void init_params(Rng& rng) override;

  Eigen::Vector3d forward(const NormWindow& w) const override;
  void backward(const NormWindow& w, const Eigen::Vector3d& seed, Net& grads,
                NormWindow* input_grads) const override;
  void backward_dual(const NormWindow& w, const NormWindow& tangent,
                     const DualSeedFn& seeds, Net& grads) const override;
  std::pair<Eigen::Vector3d, Eigen::Vector3d> forward_dual(
      const NormWindow& w, const NormWindow& tangent) const override;

 private:
  struct Trace;
  struct DualTrace;
  void run_forward(const NormWindow& w, Trace& tr) const;
  void run_forward_dual(const NormWindow& w, const NormWindow& tangent,
                        Trace& tr, DualTrace& dt) const;

  int hidden_;
  Activation act_;

 public:
  // Stage tensors; index 0 consumes the oldest frame.
  std::array<Eigen::MatrixXd, kWindow> W_xh, W_yh, W_uh, W_hh;
  std::array<Eigen::VectorXd, kWindow> b_h;
  std::array<Eigen::MatrixXd, kWindow> W_k;  ///< readout, (d_x x hidden)
  std::array<Eigen::VectorXd, kWindow> b_k;
  Eigen::MatrixXd W_out;  ///< (d_x x kWindow*d_x)
  Eigen::VectorXd b_out;
};

}  // namespace dynlearn
