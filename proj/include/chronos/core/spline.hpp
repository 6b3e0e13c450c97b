#pragma once

#include <cmath>
#include <span>
#include <vector>

#include "chronos/core/trajectory.hpp"
#include "chronos/error.hpp"

namespace chronos {

// Cubic spline through uniformly spaced knots, parameterised in knot-index
// units (knot k sits at u = k). Not-a-knot end conditions: the third
// derivative is continuous across the second and penultimate knots, so any
// cubic polynomial is reproduced exactly and no end slopes are assumed.
class UniformCubicSpline {
 public:
  explicit UniformCubicSpline(std::span<const double> knots) : y_(knots.begin(), knots.end()) {
    const std::size_t n = y_.size();
    if (n < 4) throw ValidationError("cubic resampling needs at least 4 samples");
    m_.assign(n, 0.0);

    // rhs_i = 6 * second difference; interior rows read m[i-1] + 4 m[i] + m[i+1] = rhs_i.
    auto rhs = [&](std::size_t i) { return 6.0 * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]); };

    // Substituting the end conditions m0 = 2 m1 - m2 (and its mirror) into the
    // first and last interior rows decouples them: 6 m1 = rhs_1.
    m_[1] = rhs(1) / 6.0;
    m_[n - 2] = rhs(n - 2) / 6.0;

    // Remaining rows 2..n-3 form a tridiagonal system with known ends.
    if (n > 4) {
      const std::size_t lo = 2, hi = n - 3;
      const std::size_t count = hi - lo + 1;
      std::vector<double> c(count), d(count);
      for (std::size_t k = 0; k < count; ++k) {
        const std::size_t i = lo + k;
        double r = rhs(i);
        if (i == lo) r -= m_[1];
        if (i == hi) r -= m_[n - 2];
        const double denom = 4.0 - (k ? c[k - 1] : 0.0);
        c[k] = 1.0 / denom;
        d[k] = (r - (k ? d[k - 1] : 0.0)) / denom;
      }
      m_[hi] = d[count - 1];
      for (std::size_t k = count - 1; k-- > 0;) m_[lo + k] = d[k] - c[k] * m_[lo + k + 1];
    }
    m_[0] = 2.0 * m_[1] - m_[2];
    m_[n - 1] = 2.0 * m_[n - 2] - m_[n - 3];
  }

  std::size_t size() const { return y_.size(); }

  // Value at fractional knot position u in [0, n-1].
  double operator()(double u) const {
    const std::size_t n = y_.size();
    if (u <= 0.0) u = 0.0;
    if (u >= static_cast<double>(n - 1)) u = static_cast<double>(n - 1);
    std::size_t i = static_cast<std::size_t>(std::floor(u));
    if (i >= n - 1) i = n - 2;
    const double t = u - static_cast<double>(i);
    if (t == 0.0) return y_[i];
    if (t == 1.0) return y_[i + 1];
    const double s = 1.0 - t;
    return s * y_[i] + t * y_[i + 1] + ((s * s * s - s) * m_[i] + (t * t * t - t) * m_[i + 1]) / 6.0;
  }

 private:
  std::vector<double> y_;
  std::vector<double> m_;  // second derivatives at the knots (per unit u squared)
};

// Resample onto a uniform grid at target_rate_hz spanning [t0, last sample].
// Grid nodes that coincide with input knots return the input value exactly.
inline Trajectory resample_cubic(const Trajectory& traj, double target_rate_hz) {
  if (!(target_rate_hz > 0.0) || !std::isfinite(target_rate_hz))
    throw ValidationError("target rate must be positive");
  if (traj.size() < 4) throw ValidationError("cubic resampling needs at least 4 samples");
  require_finite(traj, "resample_cubic");

  const UniformCubicSpline spline(traj.samples);
  const double span_knots = static_cast<double>(traj.size() - 1);
  // Output node k sits at u = k * rate_in / rate_out knots.
  const double ratio = traj.rate_hz / target_rate_hz;
  const auto n_out = static_cast<std::size_t>(std::floor(span_knots / ratio + 1e-9)) + 1;

  Trajectory out;
  out.t0_ms = traj.t0_ms;
  out.rate_hz = target_rate_hz;
  out.samples.resize(n_out);
  for (std::size_t k = 0; k < n_out; ++k)
    out.samples[k] = spline(static_cast<double>(k) * traj.rate_hz / target_rate_hz);
  return out;
}

// Centered differences (one-sided at the ends), in units of value per second.
inline std::vector<double> central_difference(std::span<const double> x, double rate_hz) {
  const std::size_t n = x.size();
  std::vector<double> d(n, 0.0);
  if (n < 2) return d;
  d[0] = (x[1] - x[0]) * rate_hz;
  d[n - 1] = (x[n - 1] - x[n - 2]) * rate_hz;
  for (std::size_t i = 1; i + 1 < n; ++i) d[i] = (x[i + 1] - x[i - 1]) * rate_hz / 2.0;
  return d;
}

}  // namespace chronos
