#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "chronos/core/types.hpp"
#include "chronos/error.hpp"

namespace chronos {

// Uniformly sampled 1-D position stream. Time in ms, values in dm.
struct Trajectory {
  double t0_ms = 0.0;
  double rate_hz = 10.0;
  std::vector<double> samples;

  std::size_t size() const { return samples.size(); }
  bool empty() const { return samples.empty(); }
  double period_ms() const { return 1000.0 / rate_hz; }
  double time_at(std::size_t k) const { return t0_ms + static_cast<double>(k) * 1000.0 / rate_hz; }
  double last_time() const { return empty() ? t0_ms : time_at(size() - 1); }

  bool operator==(const Trajectory&) const = default;
};

inline void require_finite(const Trajectory& t, const char* what) {
  if (!(t.rate_hz > 0.0) || !std::isfinite(t.rate_hz))
    throw ValidationError(std::string(what) + ": sampling rate must be positive");
  for (double v : t.samples)
    if (!std::isfinite(v)) throw ValidationError(std::string(what) + ": non-finite sample");
}

// Angles in [-pi, pi].
struct PhaseSeries {
  double rate_hz = 100.0;
  std::vector<double> values;

  std::size_t size() const { return values.size(); }
  bool empty() const { return values.empty(); }
  bool operator==(const PhaseSeries&) const = default;
};

// Position and velocity profiles recorded in a solo trial.
struct MotorSignature {
  std::string owner;
  MotionKind kind = MotionKind::free;
  int trial = 1;
  Trajectory position;  // dm
  Trajectory velocity;  // dm/s

  bool operator==(const MotorSignature&) const = default;
};

inline void validate_signature(const MotorSignature& s) {
  if (s.owner.empty()) throw ValidationError("signature owner must not be empty");
  if (s.position.size() != s.velocity.size() || s.position.rate_hz != s.velocity.rate_hz)
    throw ValidationError("signature position and velocity must share length and rate");
  require_finite(s.position, "signature position");
  require_finite(s.velocity, "signature velocity");
}

// Wrap an angle into [-pi, pi].
inline double wrap_angle(double a) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double w = std::remainder(a, two_pi);
  // remainder() maps odd multiples of pi to either sign; both ends are in range.
  return w;
}

}  // namespace chronos
