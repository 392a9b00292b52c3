#pragma once

#include <string>

#include <Eigen/Dense>

namespace dynlearn {

enum class Activation { Tanh, Relu };

Activation activation_from_string(const std::string& name);
std::string to_string(Activation a);

Eigen::VectorXd act_value(Activation a, const Eigen::VectorXd& z);

/// First derivative expressed through the activated value h = sigma(z):
/// tanh -> 1 - h^2; relu -> 1 if h > 0 else 0.
Eigen::VectorXd act_deriv(Activation a, const Eigen::VectorXd& h);

/// Derivative of sigma'(z), again through h: tanh -> -2 h (1 - h^2); relu -> 0.
/// Needed when differentiating directional derivatives of the network.
Eigen::VectorXd act_curvature(Activation a, const Eigen::VectorXd& h);

}  // namespace dynlearn
