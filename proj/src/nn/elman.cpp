#include "dynlearn/nn/elman.hpp"

#include <cmath>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {

namespace {
constexpr int kDx = 3;
constexpr int kDy = 2;
constexpr int kDu = 2;
}  // namespace

Elman::Elman(int hidden, Activation act, int depth)
    : hidden_(hidden), act_(act), depth_(depth) {
  if (hidden < 1) throw ConfigError("hidden size must be positive");
  if (depth != 1 && depth != kWindow)
    throw ConfigError("recurrent depth must be 1 or the window length");
  W_xh.setZero(hidden, kDx);
  W_yh.setZero(hidden, kDy);
  W_uh.setZero(hidden, kDu);
  W_hh.setZero(hidden, hidden);
  b_h.setZero(hidden);
  W_out.setZero(kDx, hidden);
  b_out.setZero(kDx);
}

std::unique_ptr<Net> Elman::clone() const { return std::make_unique<Elman>(*this); }

void Elman::visit(const TensorVisitor& fn) {
  fn({"W_xh", W_xh.data(), W_xh.rows(), W_xh.cols()});
  fn({"W_yh", W_yh.data(), W_yh.rows(), W_yh.cols()});
  fn({"W_uh", W_uh.data(), W_uh.rows(), W_uh.cols()});
  fn({"W_hh", W_hh.data(), W_hh.rows(), W_hh.cols()});
  fn({"b_h", b_h.data(), b_h.size(), 1});
  fn({"W_out", W_out.data(), W_out.rows(), W_out.cols()});
  fn({"b_out", b_out.data(), b_out.size(), 1});
}

void Elman::init_params(Rng& rng) {
  visit([&](const TensorRef& t) {
    if (t.cols == 1) {
      for (long long i = 0; i < t.size(); ++i) t.data[i] = 0.0;
      return;
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(t.cols));
    for (long long i = 0; i < t.size(); ++i)
      t.data[i] = rng.uniform(-bound, bound);
  });
}

Eigen::Vector3d Elman::forward(const NormWindow& w) const {
  Eigen::VectorXd h = Eigen::VectorXd::Zero(hidden_);
  for (int s = 0; s < depth_; ++s) {
    const int f = kWindow - depth_ + s;
    h = act_value(act_, W_xh * w.x[f] + W_yh * w.y[f] + W_uh * w.u[f] +
                            W_hh * h + b_h);
  }
  return W_out * h + b_out;
}

void Elman::backward(const NormWindow& w, const Eigen::Vector3d& seed,
                     Net& grads, NormWindow* input_grads) const {
  auto& g = dynamic_cast<Elman&>(grads);

  std::array<Eigen::VectorXd, kWindow + 1> h;
  h[0] = Eigen::VectorXd::Zero(hidden_);
  for (int s = 0; s < depth_; ++s) {
    const int f = kWindow - depth_ + s;
    h[s + 1] = act_value(act_, W_xh * w.x[f] + W_yh * w.y[f] + W_uh * w.u[f] +
                                   W_hh * h[s] + b_h);
  }

  g.b_out += seed;
  g.W_out += seed * h[depth_].transpose();
  if (input_grads) input_grads->set_zero();

  Eigen::VectorXd h_bar = W_out.transpose() * seed;
  for (int s = depth_ - 1; s >= 0; --s) {
    const int f = kWindow - depth_ + s;
    const Eigen::VectorXd a_bar = act_deriv(act_, h[s + 1]).cwiseProduct(h_bar);
    g.b_h += a_bar;
    g.W_xh += a_bar * w.x[f].transpose();
    g.W_yh += a_bar * w.y[f].transpose();
    g.W_uh += a_bar * w.u[f].transpose();
    g.W_hh += a_bar * h[s].transpose();
    if (input_grads) {
      input_grads->x[f] = W_xh.transpose() * a_bar;
      input_grads->y[f] = W_yh.transpose() * a_bar;
      input_grads->u[f] = W_uh.transpose() * a_bar;
    }
    h_bar = W_hh.transpose() * a_bar;
  }
}

}  // namespace dynlearn
