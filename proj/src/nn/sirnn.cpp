#include "dynlearn/nn/sirnn.hpp"

#include <cmath>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {

namespace {
constexpr int kDx = 3;
constexpr int kDy = 2;
constexpr int kDu = 2;
}  // namespace

struct Sirnn::Trace {
  std::array<Eigen::VectorXd, kWindow + 1> h;  ///< h[0] = 0
  std::array<Eigen::VectorXd, kWindow> k;
  Eigen::Vector3d x_hat;
};

struct Sirnn::DualTrace {
  std::array<Eigen::VectorXd, kWindow + 1> h_dot;
  std::array<Eigen::VectorXd, kWindow> a_dot;  ///< pre-activation tangents
  std::array<Eigen::VectorXd, kWindow> c_dot;
  std::array<Eigen::VectorXd, kWindow> k_dot;
  Eigen::Vector3d x_dot;
};

Sirnn::Sirnn(int hidden, Activation act) : hidden_(hidden), act_(act) {
  if (hidden < 1) throw ConfigError("hidden size must be positive");
  for (int i = 0; i < kWindow; ++i) {
    W_xh[i].setZero(hidden, kDx);
    W_yh[i].setZero(hidden, kDy);
    W_uh[i].setZero(hidden, kDu);
    W_hh[i].setZero(hidden, hidden);
    b_h[i].setZero(hidden);
    W_k[i].setZero(kDx, hidden);
    b_k[i].setZero(kDx);
  }
  W_out.setZero(kDx, kWindow * kDx);
  b_out.setZero(kDx);
}

std::unique_ptr<Net> Sirnn::clone() const { return std::make_unique<Sirnn>(*this); }

void Sirnn::visit(const TensorVisitor& fn) {
  for (int i = 0; i < kWindow; ++i) {
    const std::string s = "stage" + std::to_string(i) + ".";
    fn({s + "W_xh", W_xh[i].data(), W_xh[i].rows(), W_xh[i].cols()});
    fn({s + "W_yh", W_yh[i].data(), W_yh[i].rows(), W_yh[i].cols()});
    fn({s + "W_uh", W_uh[i].data(), W_uh[i].rows(), W_uh[i].cols()});
    fn({s + "W_hh", W_hh[i].data(), W_hh[i].rows(), W_hh[i].cols()});
    fn({s + "b_h", b_h[i].data(), b_h[i].size(), 1});
    fn({s + "W_k", W_k[i].data(), W_k[i].rows(), W_k[i].cols()});
    fn({s + "b_k", b_k[i].data(), b_k[i].size(), 1});
  }
  fn({"W_out", W_out.data(), W_out.rows(), W_out.cols()});
  fn({"b_out", b_out.data(), b_out.size(), 1});
}

void Sirnn::init_params(Rng& rng) {
  visit([&](const TensorRef& t) {
    if (t.cols == 1) {  // bias
      for (long long i = 0; i < t.size(); ++i) t.data[i] = 0.0;
      return;
    }
    const double bound = 1.0 / std::sqrt(static_cast<double>(t.cols));
    for (long long i = 0; i < t.size(); ++i)
      t.data[i] = rng.uniform(-bound, bound);
  });
}

void Sirnn::run_forward(const NormWindow& w, Trace& tr) const {
  tr.h[0] = Eigen::VectorXd::Zero(hidden_);
  for (int i = 0; i < kWindow; ++i) {
    const Eigen::VectorXd a = W_xh[i] * w.x[i] + W_yh[i] * w.y[i] +
                              W_uh[i] * w.u[i] + W_hh[i] * tr.h[i] + b_h[i];
    tr.h[i + 1] = act_value(act_, a);
    tr.k[i] = act_value(act_, W_k[i] * tr.h[i + 1] + b_k[i]);
  }
  Eigen::VectorXd kcat(kWindow * kDx);
  for (int i = 0; i < kWindow; ++i) kcat.segment(i * kDx, kDx) = tr.k[i];
  tr.x_hat = W_out * kcat + b_out;
}

Eigen::Vector3d Sirnn::forward(const NormWindow& w) const {
  Trace tr;
  run_forward(w, tr);
  return tr.x_hat;
}

void Sirnn::backward(const NormWindow& w, const Eigen::Vector3d& seed,
                     Net& grads, NormWindow* input_grads) const {
  auto& g = dynamic_cast<Sirnn&>(grads);
  Trace tr;
  run_forward(w, tr);

  g.b_out += seed;
  Eigen::VectorXd kcat(kWindow * kDx);
  for (int i = 0; i < kWindow; ++i) kcat.segment(i * kDx, kDx) = tr.k[i];
  g.W_out += seed * kcat.transpose();

  Eigen::VectorXd h_bar = Eigen::VectorXd::Zero(hidden_);  // carried adjoint
  for (int i = kWindow - 1; i >= 0; --i) {
    const Eigen::Vector3d k_bar =
        W_out.middleCols(i * kDx, kDx).transpose() * seed;
    const Eigen::VectorXd c_bar =
        act_deriv(act_, tr.k[i]).cwiseProduct(k_bar);
    g.b_k[i] += c_bar;
    g.W_k[i] += c_bar * tr.h[i + 1].transpose();
    h_bar += W_k[i].transpose() * c_bar;

    const Eigen::VectorXd a_bar =
        act_deriv(act_, tr.h[i + 1]).cwiseProduct(h_bar);
    g.b_h[i] += a_bar;
    g.W_xh[i] += a_bar * w.x[i].transpose();
    g.W_yh[i] += a_bar * w.y[i].transpose();
    g.W_uh[i] += a_bar * w.u[i].transpose();
    g.W_hh[i] += a_bar * tr.h[i].transpose();
    if (input_grads) {
      input_grads->x[i] = W_xh[i].transpose() * a_bar;
      input_grads->y[i] = W_yh[i].transpose() * a_bar;
      input_grads->u[i] = W_uh[i].transpose() * a_bar;
    }
    h_bar = W_hh[i].transpose() * a_bar;
  }
}

void Sirnn::run_forward_dual(const NormWindow& w, const NormWindow& tangent,
                             Trace& tr, DualTrace& dt) const {
  tr.h[0] = Eigen::VectorXd::Zero(hidden_);
  dt.h_dot[0] = Eigen::VectorXd::Zero(hidden_);
  for (int i = 0; i < kWindow; ++i) {
    const Eigen::VectorXd a = W_xh[i] * w.x[i] + W_yh[i] * w.y[i] +
                              W_uh[i] * w.u[i] + W_hh[i] * tr.h[i] + b_h[i];
    dt.a_dot[i] = W_xh[i] * tangent.x[i] + W_yh[i] * tangent.y[i] +
                  W_uh[i] * tangent.u[i] + W_hh[i] * dt.h_dot[i];
    tr.h[i + 1] = act_value(act_, a);
    dt.h_dot[i + 1] =
        act_deriv(act_, tr.h[i + 1]).cwiseProduct(dt.a_dot[i]);
    const Eigen::VectorXd c = W_k[i] * tr.h[i + 1] + b_k[i];
    dt.c_dot[i] = W_k[i] * dt.h_dot[i + 1];
    tr.k[i] = act_value(act_, c);
    dt.k_dot[i] = act_deriv(act_, tr.k[i]).cwiseProduct(dt.c_dot[i]);
  }
  Eigen::VectorXd kcat(kWindow * kDx), kcat_dot(kWindow * kDx);
  for (int i = 0; i < kWindow; ++i) {
    kcat.segment(i * kDx, kDx) = tr.k[i];
    kcat_dot.segment(i * kDx, kDx) = dt.k_dot[i];
  }
  tr.x_hat = W_out * kcat + b_out;
  dt.x_dot = W_out * kcat_dot;
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> Sirnn::forward_dual(
    const NormWindow& w, const NormWindow& tangent) const {
  Trace tr;
  DualTrace dt;
  run_forward_dual(w, tangent, tr, dt);
  return {tr.x_hat, dt.x_dot};
}

void Sirnn::backward_dual(const NormWindow& w, const NormWindow& tangent,
                          const DualSeedFn& seeds, Net& grads) const {
  auto& g = dynamic_cast<Sirnn&>(grads);
  Trace tr;
  DualTrace dt;
  run_forward_dual(w, tangent, tr, dt);
  const auto [seed, seed_dot] = seeds(tr.x_hat, dt.x_dot);

  g.b_out += seed;
  Eigen::VectorXd kcat(kWindow * kDx), kcat_dot(kWindow * kDx);
  for (int i = 0; i < kWindow; ++i) {
    kcat.segment(i * kDx, kDx) = tr.k[i];
    kcat_dot.segment(i * kDx, kDx) = dt.k_dot[i];
  }
  // W_out enters the objective through both x_hat and x_dot.
  g.W_out += seed * kcat.transpose() + seed_dot * kcat_dot.transpose();

  Eigen::VectorXd h_bar = Eigen::VectorXd::Zero(hidden_);
  Eigen::VectorXd h_dot_bar = Eigen::VectorXd::Zero(hidden_);
  for (int i = kWindow - 1; i >= 0; --i) {
    const Eigen::Vector3d k_bar =
        W_out.middleCols(i * kDx, kDx).transpose() * seed;
    const Eigen::Vector3d k_dot_bar =
        W_out.middleCols(i * kDx, kDx).transpose() * seed_dot;

    const Eigen::VectorXd d2 = act_deriv(act_, tr.k[i]);
    // k = sigma(c), k_dot = sigma'(c) .* c_dot: the adjoint of c collects the
    // curvature term from the tangent branch.
    const Eigen::VectorXd c_bar =
        d2.cwiseProduct(k_bar) +
        act_curvature(act_, tr.k[i]).cwiseProduct(dt.c_dot[i]).cwiseProduct(k_dot_bar);
    const Eigen::VectorXd c_dot_bar = d2.cwiseProduct(k_dot_bar);
    g.b_k[i] += c_bar;
    g.W_k[i] +=
        c_bar * tr.h[i + 1].transpose() + c_dot_bar * dt.h_dot[i + 1].transpose();
    h_bar += W_k[i].transpose() * c_bar;
    h_dot_bar += W_k[i].transpose() * c_dot_bar;

    const Eigen::VectorXd d1 = act_deriv(act_, tr.h[i + 1]);
    const Eigen::VectorXd a_bar =
        d1.cwiseProduct(h_bar) +
        act_curvature(act_, tr.h[i + 1]).cwiseProduct(dt.a_dot[i]).cwiseProduct(h_dot_bar);
    const Eigen::VectorXd a_dot_bar = d1.cwiseProduct(h_dot_bar);
    g.b_h[i] += a_bar;
    g.W_xh[i] += a_bar * w.x[i].transpose() + a_dot_bar * tangent.x[i].transpose();
    g.W_yh[i] += a_bar * w.y[i].transpose() + a_dot_bar * tangent.y[i].transpose();
    g.W_uh[i] += a_bar * w.u[i].transpose() + a_dot_bar * tangent.u[i].transpose();
    g.W_hh[i] += a_bar * tr.h[i].transpose() + a_dot_bar * dt.h_dot[i].transpose();
    h_bar = W_hh[i].transpose() * a_bar;
    h_dot_bar = W_hh[i].transpose() * a_dot_bar;
  }
}

}  // namespace dynlearn
