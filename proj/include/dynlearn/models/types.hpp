#pragma once

#include <array>
#include <string>

namespace dynlearn {

enum class ComponentKind { Sg, Gfm };

std::string to_string(ComponentKind kind);
ComponentKind component_kind_from_string(const std::string& s);

/// Terminal bus phasor seen by the component (magnitude, angle).
struct TerminalVoltage {
  double v = 1.0;
  double theta = 0.0;
};

/// Operator set-points: active power plus one component-specific reference
/// (voltage reference for machines, reactive power for inverters).
struct Setpoints {
  double p_star = 0.0;
  double aux = 0.0;
};

/// Reduced per-component state used for learning: rotor/controller angle,
/// speed, and internal voltage magnitude.
struct ReducedState {
  double delta = 0.0;
  double omega = 0.0;
  double e = 0.0;
};

/// Derivative bundle for a model whose state may contain instantaneous
/// (algebraic) entries: when algebraic[i] is set, value[i] holds the
/// closed-form state value instead of a time derivative.
template <int N>
struct SlotDerivs {
  std::array<double, N> value{};
  std::array<bool, N> algebraic{};
};

}  // namespace dynlearn
