#include "dynlearn/nn/activation.hpp"

#include <cmath>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {

Activation activation_from_string(const std::string& name) {
  if (name == "tanh") return Activation::Tanh;
  if (name == "relu") return Activation::Relu;
  throw ConfigError("unknown activation: " + name);
}

std::string to_string(Activation a) {
  return a == Activation::Tanh ? "tanh" : "relu";
}

Eigen::VectorXd act_value(Activation a, const Eigen::VectorXd& z) {
  if (a == Activation::Tanh)
    return z.unaryExpr([](double v) { return std::tanh(v); });
  return z.cwiseMax(0.0);
}

Eigen::VectorXd act_deriv(Activation a, const Eigen::VectorXd& h) {
  if (a == Activation::Tanh)
    return (1.0 - h.array().square()).matrix();
  return h.unaryExpr([](double v) { return v > 0.0 ? 1.0 : 0.0; });
}

Eigen::VectorXd act_curvature(Activation a, const Eigen::VectorXd& h) {
  if (a == Activation::Tanh)
    return (-2.0 * h.array() * (1.0 - h.array().square())).matrix();
  return Eigen::VectorXd::Zero(h.size());
}

}  // namespace dynlearn
