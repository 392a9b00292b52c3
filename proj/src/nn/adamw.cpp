#include "dynlearn/nn/adamw.hpp"

#include <cmath>

#include "dynlearn/support/errors.hpp"

namespace dynlearn {

AdamW::AdamW(Net& net, const AdamwConfig& cfg) : cfg_(cfg) {
  const long long n = net.param_count();
  m_ = Eigen::VectorXd::Zero(n);
  v_ = Eigen::VectorXd::Zero(n);
}

void AdamW::step(Net& params, Net& grads) {
  ++t_;
  const double bc1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  const double bc2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

  std::vector<std::pair<double*, long long>> gtensors;
  grads.visit([&](const TensorRef& t) { gtensors.emplace_back(t.data, t.size()); });

  long long off = 0;
  std::size_t idx = 0;
  params.visit([&](const TensorRef& t) {
    if (idx >= gtensors.size() || gtensors[idx].second != t.size())
      throw ConfigError("gradient layout does not match parameters");
    const double* g = gtensors[idx].first;
    for (long long i = 0; i < t.size(); ++i) {
      double& m = m_[off + i];
      double& v = v_[off + i];
      m = cfg_.beta1 * m + (1.0 - cfg_.beta1) * g[i];
      v = cfg_.beta2 * v + (1.0 - cfg_.beta2) * g[i] * g[i];
      const double m_hat = m / bc1;
      const double v_hat = v / bc2;
      t.data[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps) +
                   cfg_.lr * cfg_.weight_decay * t.data[i];
    }
    off += t.size();
    ++idx;
  });
  if (off != m_.size()) throw ConfigError("optimizer state size mismatch");
}

}  // namespace dynlearn
