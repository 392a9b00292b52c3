#include "dynlearn/sim/network.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

namespace dynlearn {

void NetworkModel::validate() const {
  if (E_inf <= 0.0) throw std::domain_error("NetworkModel: E_inf must be positive");
  if (X_line <= 0.0) throw std::domain_error("NetworkModel: X_line must be positive");
  if (X_fault <= 0.0) throw std::domain_error("NetworkModel: X_fault must be positive");
  if (X_src <= 0.0) throw std::domain_error("NetworkModel: X_src must be positive");
}

NetworkModel NetworkModel::from_config(const KeyValue& kv, const std::string& section) {
  const std::string pre = section.empty() ? "" : section + ".";
  NetworkModel net;
  net.E_inf = kv.f64_or(pre + "E_inf", net.E_inf);
  net.theta_inf = kv.f64_or(pre + "theta_inf", net.theta_inf);
  net.X_line = kv.f64_or(pre + "X_line", net.X_line);
  net.X_fault = kv.f64_or(pre + "X_fault", net.X_fault);
  net.X_src = kv.f64_or(pre + "X_src", net.X_src);
  net.validate();
  return net;
}

TerminalVoltage solve_terminal_voltage(const NetworkModel& net, double e_internal,
                                       double delta, bool faulted,
                                       double location_frac) {
  net.validate();
  using cplx = std::complex<double>;
  const cplx e_src = std::polar(e_internal, delta);
  const cplx e_inf = std::polar(net.E_inf, net.theta_inf);

  // All branches are purely reactive, so the common 1/j factors cancel and
  // the nodal equations can be written with real susceptance magnitudes.
  const double g1 = 1.0 / net.X_src;
  cplx v_t;
  if (!faulted) {
    const double gl = 1.0 / net.X_line;
    v_t = (g1 * e_src + gl * e_inf) / (g1 + gl);
  } else if (location_frac <= 1e-12) {
    // Shunt directly at the terminal bus.
    const double gl = 1.0 / net.X_line;
    const double gf = 1.0 / net.X_fault;
    v_t = (g1 * e_src + gl * e_inf) / (g1 + gl + gf);
  } else if (location_frac >= 1.0 - 1e-12) {
    // Shunt across the infinite bus has no effect on the divider.
    const double gl = 1.0 / net.X_line;
    v_t = (g1 * e_src + gl * e_inf) / (g1 + gl);
  } else {
    const double g2 = 1.0 / (location_frac * net.X_line);
    const double g3 = 1.0 / ((1.0 - location_frac) * net.X_line);
    const double gf = 1.0 / net.X_fault;
    // Two-node elimination: terminal node T and fault node F.
    //   (g1+g2) V_T - g2 V_F = g1 E_src
    //   -g2 V_T + (g2+g3+gf) V_F = g3 E_inf
    const double a = g1 + g2;
    const double d = g2 + g3 + gf;
    const double det = a * d - g2 * g2;
    v_t = (d * g1 * e_src + g2 * g3 * e_inf) / det;
  }

  TerminalVoltage y;
  y.v = std::abs(v_t);
  y.theta = (y.v == 0.0) ? 0.0 : std::arg(v_t);
  return y;
}

}  // namespace dynlearn
