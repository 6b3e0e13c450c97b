#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>
#include <vector>

#include "chronos/core/spline.hpp"
#include "chronos/core/trajectory.hpp"
#include "chronos/dynamics/integrator.hpp"
#include "chronos/dynamics/params.hpp"

namespace chronos {

inline constexpr double kVpTickHz = 100.0;
inline constexpr double kSignatureCrossfadeS = 0.5;

// Replays a motor signature at the VP tick rate. Past the end, playback loops
// with a raised-cosine crossfade from the tail into the head.
class SignaturePlayback {
 public:
  SignaturePlayback(const MotorSignature& sig, double offset_dm)
      : pos_(resample_to_tick(sig.position)), vel_(resample_to_tick(sig.velocity)) {
    for (double& p : pos_) p -= offset_dm;
    const auto fade = static_cast<std::size_t>(std::lround(kSignatureCrossfadeS * kVpTickHz));
    fade_ = pos_.size() > 2 * fade ? fade : 0;
  }

  std::size_t size() const { return pos_.size(); }
  double position(std::size_t tick) const { return sample(pos_, tick); }
  double velocity(std::size_t tick) const { return sample(vel_, tick); }

 private:
  static std::vector<double> resample_to_tick(const Trajectory& t) {
    if (t.size() >= 4) return resample_cubic(t, kVpTickHz).samples;
    if (t.empty()) throw ValidationError("empty motor signature");
    return t.samples;
  }

  double sample(const std::vector<double>& s, std::size_t tick) const {
    // Period n - fade; each cycle after the first opens by fading the previous
    // cycle's tail s[period + p] into the head s[p].
    const std::size_t n = s.size();
    if (fade_ == 0) return s[tick % n];
    const std::size_t period = n - fade_;
    const std::size_t p = tick % period;
    if (tick < period || p >= fade_) return s[p];
    const double w = 0.5 * (1.0 - std::cos(std::numbers::pi * static_cast<double>(p) / static_cast<double>(fade_)));
    return w * s[p] + (1.0 - w) * s[period + p];
  }

  std::vector<double> pos_, vel_;
  std::size_t fade_ = 0;
};

// A server-hosted player. Dynamics run in coordinates centred on the game
// area so the oscillator models swing around its middle; inputs and outputs
// are absolute dm.
class VirtualPlayer {
 public:
  VirtualPlayer(VirtualPlayerConfig config, const std::optional<MotorSignature>& signature)
      : config_(std::move(config)) {
    validate(config_);
    if (config_.needs_signature()) {
      if (!signature) throw ValidationError("virtual player is missing its motor signature");
      playback_.emplace(*signature, kGameCenterDm);
      state_.x = playback_->position(0);
    }
  }

  const VirtualPlayerConfig& config() const { return config_; }
  const VpState& state() const { return state_; }
  double position() const { return std::clamp(kGameCenterDm + state_.x, 0.0, kGameAreaDm); }
  double velocity() const { return state_.v; }

  // Integrate over dt_s in 100 Hz substeps, holding the neighbor mean fixed.
  void advance(const NeighborMean& neighbors, double dt_s) {
    const auto steps = std::max<long>(1, std::lround(std::ceil(dt_s * kVpTickHz - 1e-9)));
    const double h = dt_s / static_cast<double>(steps);
    for (long k = 0; k < steps; ++k) {
      CouplingInput in;
      in.y_bar = neighbors.y_bar - kGameCenterDm;
      in.ydot_bar = neighbors.ydot_bar;
      if (playback_) {
        in.sigma = playback_->position(tick_);
        in.sigma_dot = playback_->velocity(tick_);
      }
      state_ = step_vp(state_, config_.dynamics, config_.control, in, h);
      ++tick_;
    }
  }

 private:
  VirtualPlayerConfig config_;
  std::optional<SignaturePlayback> playback_;
  VpState state_{};
  std::size_t tick_ = 0;
};

}  // namespace chronos
