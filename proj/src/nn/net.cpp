#include "dynlearn/nn/net.hpp"

#include "dynlearn/nn/elman.hpp"
#include "dynlearn/nn/sirnn.hpp"
#include "dynlearn/support/errors.hpp"

namespace dynlearn {

NormWindow normalize_window(const Sample& s, const Normalizer& norm) {
  NormWindow w;
  for (int i = 0; i < kWindow; ++i) {
    const auto& f = s.window[static_cast<std::size_t>(i)];
    w.x[i] = norm.norm_x(f.x);
    w.y[i] = norm.norm_y(f.y);
    w.u[i] = norm.norm_u(f.u);
  }
  return w;
}

Eigen::Vector3d normalize_target(const Sample& s, const Normalizer& norm) {
  return norm.norm_x(s.target);
}

void Net::backward_dual(const NormWindow&, const NormWindow&, const DualSeedFn&,
                        Net&) const {
  throw ConfigError("model kind '" + kind() +
                    "' does not support directional-derivative training");
}

std::pair<Eigen::Vector3d, Eigen::Vector3d> Net::forward_dual(
    const NormWindow&, const NormWindow&) const {
  throw ConfigError("model kind '" + kind() +
                    "' does not support directional derivatives");
}

std::unique_ptr<Net> Net::zeros_like() const {
  std::unique_ptr<Net> out = clone();
  out->set_zero();
  return out;
}

void Net::set_zero() {
  visit([](const TensorRef& t) {
    for (long long i = 0; i < t.size(); ++i) t.data[i] = 0.0;
  });
}

long long Net::param_count() {
  long long n = 0;
  visit([&](const TensorRef& t) { n += t.size(); });
  return n;
}

void Net::scale_params(double s) {
  visit([&](const TensorRef& t) {
    for (long long i = 0; i < t.size(); ++i) t.data[i] *= s;
  });
}

void Net::add_scaled(Net& other, double s) {
  std::vector<double*> mine;
  std::vector<long long> sizes;
  visit([&](const TensorRef& t) {
    mine.push_back(t.data);
    sizes.push_back(t.size());
  });
  std::size_t idx = 0;
  other.visit([&](const TensorRef& t) {
    if (idx >= mine.size() || t.size() != sizes[idx])
      throw ConfigError("parameter layout mismatch between models");
    double* dst = mine[idx];
    for (long long i = 0; i < t.size(); ++i) dst[i] += s * t.data[i];
    ++idx;
  });
}

std::unique_ptr<Net> make_net(const std::string& kind, int hidden,
                              Activation act) {
  if (kind == "sirnn") return std::make_unique<Sirnn>(hidden, act);
  if (kind == "rnn1") return std::make_unique<Elman>(hidden, act, 1);
  if (kind == "rnn4") return std::make_unique<Elman>(hidden, act, kWindow);
  throw ConfigError("unknown model kind: " + kind);
}

}  // namespace dynlearn
