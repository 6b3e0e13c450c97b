#pragma once

#include <array>
#include <cmath>

#include "chronos/dynamics/control.hpp"
#include "chronos/error.hpp"

namespace chronos {

inline constexpr double kMaxStepSeconds = 0.05;

// One classical 4th-order Runge-Kutta step of dy/dt = rhs(y).
template <std::size_t N, typename Rhs>
std::array<double, N> rk4_step(const std::array<double, N>& y, double dt, Rhs&& rhs) {
  auto axpy = [](const std::array<double, N>& a, double h, const std::array<double, N>& k) {
    std::array<double, N> r;
    for (std::size_t i = 0; i < N; ++i) r[i] = a[i] + h * k[i];
    return r;
  };
  const auto k1 = rhs(y);
  const auto k2 = rhs(axpy(y, dt / 2.0, k1));
  const auto k3 = rhs(axpy(y, dt / 2.0, k2));
  const auto k4 = rhs(axpy(y, dt, k3));
  std::array<double, N> out;
  for (std::size_t i = 0; i < N; ++i) out[i] = y[i] + dt / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Advance (x, v, psi, chi) by dt_s with the coupling input held constant.
// psi and chi are kept off zero by magnitude clamping, both inside the vector
// field and on the returned state.
inline VpState step_vp(const VpState& state, const DynamicsParams& dyn, const ControllerParams& ctl,
                       const CouplingInput& input, double dt_s) {
  if (!(dt_s > 0.0) || dt_s > kMaxStepSeconds) throw ValidationError("VP step must lie in (0, 0.05] s");
  const bool adaptive = ctl.controller == ControllerKind::adaptive;

  auto rhs = [&](const std::array<double, 4>& y) -> std::array<double, 4> {
    VpState s{y[0], y[1], y[2], y[3]};
    if (adaptive) {
      s.psi = clamp_magnitude(s.psi, kPsiFloor);
      s.chi = clamp_magnitude(s.chi, kChiFloor);
    }
    const AdaptiveOutput c = evaluate_controller(s, input, ctl, dyn);
    return {s.v, inner_dynamics(s.x, s.v, dyn) + c.u, c.psi_dot, c.chi_dot};
  };

  const auto y = rk4_step<4>({state.x, state.v, state.psi, state.chi}, dt_s, rhs);
  VpState next{y[0], y[1], y[2], y[3]};
  if (adaptive) {
    next.psi = clamp_magnitude(next.psi, kPsiFloor);
    next.chi = clamp_magnitude(next.chi, kChiFloor);
  }
  if (!std::isfinite(next.x) || !std::isfinite(next.v) || !std::isfinite(next.psi) || !std::isfinite(next.chi))
    throw TrialAbort("virtual player state became non-finite");
  return next;
}

}  // namespace chronos
