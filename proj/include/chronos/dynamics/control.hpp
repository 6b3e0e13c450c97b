#pragma once

#include <cmath>
#include <optional>
#include <span>

#include "chronos/dynamics/params.hpp"
#include "chronos/error.hpp"

namespace chronos {

// Magnitude floors for the adaptive parameters; their update laws divide by them.
inline constexpr double kPsiFloor = 1e-3;
inline constexpr double kChiFloor = 1e-3;

// Initial adaptive gains. With xddot = f + u the first term of the adaptive
// law damps the velocity mismatch only for negative psi + chi e^2; positive
// starts drive the VP away from its reference.
inline constexpr double kInitialPsi = -1.0;
inline constexpr double kInitialChi = -1.0;

struct VpState {
  double x = 0.0;  // dm
  double v = 0.0;  // dm/s
  double psi = kInitialPsi;
  double chi = kInitialChi;

  bool operator==(const VpState&) const = default;
};

struct CouplingInput {
  double y_bar = 0.0;     // mean visible-neighbor position
  double ydot_bar = 0.0;  // mean visible-neighbor velocity
  std::optional<double> sigma;      // signature position
  std::optional<double> sigma_dot;  // signature velocity
};

struct AdaptiveOutput {
  double u = 0.0;
  double psi_dot = 0.0;
  double chi_dot = 0.0;
};

// Keeps the sign, raises the magnitude to the floor.
inline double clamp_magnitude(double value, double floor) {
  if (std::abs(value) >= floor) return value;
  return value < 0.0 ? -floor : floor;
}

inline double inner_dynamics(double x, double v, const DynamicsParams& p) {
  if (!std::isfinite(x) || !std::isfinite(v)) throw TrialAbort("inner dynamics: non-finite state");
  switch (p.model) {
    case DynamicsModel::harmonic:
      return -(p.a * v + p.b * x);
    case DynamicsModel::hkb:
      return -(p.alpha * x * x + p.beta * v * v - p.gamma) * v - p.omega * p.omega * x;
    case DynamicsModel::double_integrator:
      return 0.0;
  }
  return 0.0;
}

inline double control_pd(double x, double v, const CouplingInput& in, const ControllerParams& p) {
  if (!in.sigma_dot) throw ValidationError("PD control needs the signature velocity");
  return p.kp * (in.y_bar - x) + p.ksigma * (*in.sigma_dot - v);
}

namespace detail {

// Shared shape of the adaptive laws: track reference (r, rdot).
// chi_dot needs the final acceleration, so callers fill it in.
inline AdaptiveOutput adaptive_tracking(const VpState& s, double r, double rdot, double c, double delta) {
  const double e = s.x - r;
  const double edot = s.v - rdot;
  AdaptiveOutput out;
  out.u = (s.psi + s.chi * e * e) * edot - c * std::exp(-delta * edot * edot) * e;
  out.psi_dot = -(e * edot + e * e) / s.psi;
  return out;
}

inline void require_floor(const VpState& s) {
  if (!(std::abs(s.psi) >= kPsiFloor) || !(std::abs(s.chi) >= kChiFloor))
    throw TrialAbort("degenerate adaptation: |psi| or |chi| below the clamp floor");
}

}  // namespace detail

inline AdaptiveOutput control_adaptive_follower(const VpState& s, const CouplingInput& in,
                                                const ControllerParams& p, const DynamicsParams& dyn) {
  detail::require_floor(s);
  const double f = inner_dynamics(s.x, s.v, dyn);
  AdaptiveOutput out = detail::adaptive_tracking(s, in.y_bar, in.ydot_bar, p.c, p.delta);
  out.chi_dot = -(s.v - in.ydot_bar) * (f + out.u) / s.chi;
  return out;
}

// Signature tracking blended with neighbor attraction. lambda -> 1 when the VP
// sits on its neighbors, handing control to the signature term. psi and chi
// adapt against the signature.
inline AdaptiveOutput control_adaptive_leader(const VpState& s, const CouplingInput& in,
                                              const ControllerParams& p, const DynamicsParams& dyn) {
  if (!in.sigma || !in.sigma_dot) throw ValidationError("adaptive leader needs the signature trajectory");
  detail::require_floor(s);
  const double f = inner_dynamics(s.x, s.v, dyn);
  const double lambda = std::exp(-p.delta * std::abs(s.x - in.y_bar));
  AdaptiveOutput track = detail::adaptive_tracking(s, *in.sigma, *in.sigma_dot, p.c, p.delta);
  AdaptiveOutput out;
  out.u = lambda * track.u + (1.0 - lambda) * p.k * (in.y_bar - s.x);
  out.psi_dot = track.psi_dot;
  out.chi_dot = -(s.v - *in.sigma_dot) * (f + out.u) / s.chi;
  return out;
}

struct NeighborMean {
  double y_bar = 0.0;
  double ydot_bar = 0.0;
};

inline NeighborMean aggregate_neighbors(std::span<const double> positions, std::span<const double> velocities) {
  if (positions.empty()) throw ValidationError("a virtual player needs at least one visible neighbor");
  if (positions.size() != velocities.size())
    throw ValidationError("neighbor position and velocity counts differ");
  NeighborMean m;
  for (std::size_t i = 0; i < positions.size(); ++i) {
    m.y_bar += positions[i];
    m.ydot_bar += velocities[i];
  }
  const auto n = static_cast<double>(positions.size());
  m.y_bar /= n;
  m.ydot_bar /= n;
  return m;
}

// Control plus adaptation rates for any controller configuration.
inline AdaptiveOutput evaluate_controller(const VpState& s, const CouplingInput& in, const ControllerParams& ctl,
                                          const DynamicsParams& dyn) {
  if (ctl.controller == ControllerKind::pd) return {control_pd(s.x, s.v, in, ctl), 0.0, 0.0};
  return ctl.mode == VpMode::leader ? control_adaptive_leader(s, in, ctl, dyn)
                                    : control_adaptive_follower(s, in, ctl, dyn);
}

}  // namespace chronos
