#pragma once

#include <cmath>
#include <numbers>
#include <optional>
#include <string>

#include "chronos/core/types.hpp"
#include "chronos/error.hpp"

namespace chronos {

enum class DynamicsModel { harmonic, hkb, double_integrator };
enum class ControllerKind { pd, adaptive };
enum class VpMode { leader, follower };

inline std::string_view to_string(DynamicsModel m) {
  switch (m) {
    case DynamicsModel::harmonic: return "harmonic";
    case DynamicsModel::hkb: return "hkb";
    case DynamicsModel::double_integrator: return "double_integrator";
  }
  return "?";
}
inline std::string_view to_string(ControllerKind c) { return c == ControllerKind::pd ? "pd" : "adaptive"; }
inline std::string_view to_string(VpMode m) { return m == VpMode::leader ? "leader" : "follower"; }

inline DynamicsModel parse_dynamics_model(std::string_view s) {
  if (s == "harmonic") return DynamicsModel::harmonic;
  if (s == "hkb") return DynamicsModel::hkb;
  if (s == "double_integrator") return DynamicsModel::double_integrator;
  throw ValidationError("unknown model '" + std::string(s) + "' (expected harmonic|hkb|double_integrator)");
}
inline ControllerKind parse_controller(std::string_view s) {
  if (s == "pd") return ControllerKind::pd;
  if (s == "adaptive") return ControllerKind::adaptive;
  throw ValidationError("unknown controller '" + std::string(s) + "' (expected pd|adaptive)");
}
inline VpMode parse_vp_mode(std::string_view s) {
  if (s == "leader") return VpMode::leader;
  if (s == "follower") return VpMode::follower;
  throw ValidationError("unknown VP mode '" + std::string(s) + "' (expected leader|follower)");
}

// Platform defaults used whenever the operator leaves a parameter unset.
namespace defaults {
inline constexpr double harmonic_a = 1.0;
inline constexpr double harmonic_b = 4.0;
inline constexpr double hkb_alpha = 1.0;
inline constexpr double hkb_beta = 1.0;
inline constexpr double hkb_gamma = 1.0;
inline constexpr double hkb_omega = 2.0 * std::numbers::pi * 0.25;
inline constexpr double pd_leader_kp = 0.2;
inline constexpr double pd_leader_ksigma = 2.0;
inline constexpr double pd_follower_kp = 2.0;
inline constexpr double pd_follower_ksigma = 0.2;
inline constexpr double adaptive_c = 1.0;
inline constexpr double adaptive_delta = 1.0;
inline constexpr double adaptive_k = 2.0;
}  // namespace defaults

struct DynamicsParams {
  DynamicsModel model = DynamicsModel::hkb;
  double a = defaults::harmonic_a;
  double b = defaults::harmonic_b;
  double alpha = defaults::hkb_alpha;
  double beta = defaults::hkb_beta;
  double gamma = defaults::hkb_gamma;
  double omega = defaults::hkb_omega;

  bool operator==(const DynamicsParams&) const = default;
};

struct ControllerParams {
  ControllerKind controller = ControllerKind::pd;
  VpMode mode = VpMode::follower;
  double kp = defaults::pd_follower_kp;
  double ksigma = defaults::pd_follower_ksigma;
  double c = defaults::adaptive_c;
  double delta = defaults::adaptive_delta;
  double k = defaults::adaptive_k;

  bool operator==(const ControllerParams&) const = default;
};

inline ControllerParams default_controller(ControllerKind kind, VpMode mode) {
  ControllerParams p;
  p.controller = kind;
  p.mode = mode;
  if (mode == VpMode::leader) {
    p.kp = defaults::pd_leader_kp;
    p.ksigma = defaults::pd_leader_ksigma;
  }
  return p;
}

inline void validate(const DynamicsParams& p) {
  for (double v : {p.a, p.b, p.alpha, p.beta, p.gamma, p.omega})
    if (!std::isfinite(v)) throw ValidationError("dynamics parameters must be finite");
  if (p.model == DynamicsModel::harmonic && !(p.b > 0.0 && p.a >= 0.0))
    throw ValidationError("harmonic model needs b > 0 and a >= 0");
  if (p.model == DynamicsModel::hkb && !(p.omega > 0.0))
    throw ValidationError("hkb model needs omega > 0");
}

inline void validate(const ControllerParams& p) {
  for (double v : {p.kp, p.ksigma, p.c, p.delta, p.k})
    if (!std::isfinite(v) || v < 0.0) throw ValidationError("controller gains must be finite and nonnegative");
  if (p.controller == ControllerKind::adaptive && !(p.delta > 0.0))
    throw ValidationError("adaptive controller needs delta > 0");
}

struct SignatureRef {
  std::string owner;
  MotionKind kind = MotionKind::sinusoidal;

  bool operator==(const SignatureRef&) const = default;
};

struct VirtualPlayerConfig {
  DynamicsParams dynamics;
  ControllerParams control;
  std::optional<SignatureRef> signature;

  bool operator==(const VirtualPlayerConfig&) const = default;

  // PD always tracks a signature velocity; the adaptive leader tracks a
  // signature trajectory; the adaptive follower takes none.
  bool needs_signature() const {
    return control.controller == ControllerKind::pd || control.mode == VpMode::leader;
  }
};

inline void validate(const VirtualPlayerConfig& c) {
  validate(c.dynamics);
  validate(c.control);
  if (c.needs_signature() && !c.signature)
    throw ValidationError(std::string("a ") + std::string(to_string(c.control.controller)) + " " +
                          std::string(to_string(c.control.mode)) + " VP needs a motor signature");
  if (!c.needs_signature() && c.signature)
    throw ValidationError("an adaptive follower VP cannot be given a motor signature");
}

}  // namespace chronos
