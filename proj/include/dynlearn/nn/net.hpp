#pragma once

#include <functional>
#include <memory>
#include <string>

#include "dynlearn/data/dataset.hpp"
#include "dynlearn/nn/activation.hpp"
#include "dynlearn/support/rng.hpp"

namespace dynlearn {

/// Normalized window fed to a network; also reused for input tangents and
/// input gradients, which share the layout.
struct NormWindow {
  std::array<Eigen::Vector3d, kWindow> x{};
  std::array<Eigen::Vector2d, kWindow> y{};
  std::array<Eigen::Vector2d, kWindow> u{};

  void set_zero() {
    for (auto& v : x) v.setZero();
    for (auto& v : y) v.setZero();
    for (auto& v : u) v.setZero();
  }
};

NormWindow normalize_window(const Sample& s, const Normalizer& norm);
Eigen::Vector3d normalize_target(const Sample& s, const Normalizer& norm);

/// Mutable view of one parameter tensor (column-major; cols == 1 for biases).
struct TensorRef {
  std::string name;
  double* data = nullptr;
  long long rows = 0;
  long long cols = 0;
  long long size() const { return rows * cols; }
};

using TensorVisitor = std::function<void(const TensorRef&)>;

/// Given the primal and directional-derivative outputs, returns the reverse
/// seeds to apply to each of them.
using DualSeedFn = std::function<std::pair<Eigen::Vector3d, Eigen::Vector3d>(
    const Eigen::Vector3d& x_hat, const Eigen::Vector3d& x_dot)>;

/// One-step predictors over normalized windows. Gradients accumulate into a
/// structurally identical instance so minibatch partials can be kept per
/// block and reduced in a fixed order.
class Net {
 public:
  virtual ~Net() = default;

  virtual std::string kind() const = 0;
  virtual int hidden() const = 0;
  virtual Activation activation() const = 0;

  virtual std::unique_ptr<Net> clone() const = 0;
  /// Parameter tensors in canonical order; the order defines optimizer state
  /// layout, initialization, and serialization.
  virtual void visit(const TensorVisitor& fn) = 0;
  /// Weights uniform in +-1/sqrt(fan_in) drawn in storage order; biases zero.
  virtual void init_params(Rng& rng) = 0;

  virtual Eigen::Vector3d forward(const NormWindow& w) const = 0;

  /// Reverse pass from `seed` on the output; accumulates parameter gradients
  /// into `grads` and, when given, window-input gradients into `input_grads`.
  virtual void backward(const NormWindow& w, const Eigen::Vector3d& seed,
                        Net& grads, NormWindow* input_grads) const = 0;

  /// Forward with an input tangent, then reverse through both the primal and
  /// tangent computations. Supports losses that penalize the directional
  /// derivative of the prediction. Optional per subclass.
  virtual void backward_dual(const NormWindow& w, const NormWindow& tangent,
                             const DualSeedFn& seeds, Net& grads) const;

  /// Primal output and directional derivative along an input tangent.
  virtual std::pair<Eigen::Vector3d, Eigen::Vector3d> forward_dual(
      const NormWindow& w, const NormWindow& tangent) const;

  std::unique_ptr<Net> zeros_like() const;  ///< same shapes, all parameters 0
  void set_zero();
  long long param_count();

  void scale_params(double s);
  void add_scaled(Net& other, double s);  ///< this += s * other
};

std::unique_ptr<Net> make_net(const std::string& kind, int hidden, Activation act);

}  // namespace dynlearn
