#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <numeric>
#include <vector>

#include "chronos/core/trajectory.hpp"
#include "chronos/error.hpp"
#include "chronos/metrics/fft.hpp"

namespace chronos {

inline constexpr std::size_t kMinPhaseSamples = 64;
inline constexpr double kDefaultEdgeDiscard = 0.05;

struct PhaseOptions {
  double edge_discard_frac = kDefaultEdgeDiscard;
  // Optional correction applied to the raw angle series (full length, before
  // edge discard). Left empty, the analytic-signal angle is used as is.
  std::function<void(std::vector<double>&)> protophase_correction;
};

// Analytic signal of a real sequence: zero-pad to a power of two, keep DC and
// Nyquist, double positive frequencies, drop negative ones, truncate back.
inline std::vector<std::complex<double>> analytic_signal(std::span<const double> x) {
  const std::size_t n = x.size();
  const std::size_t m = next_pow2(n);
  std::vector<std::complex<double>> a(m, 0.0);
  std::copy(x.begin(), x.end(), a.begin());
  fft_inplace(a);
  for (std::size_t k = 1; k < m; ++k) {
    if (k < m / 2) a[k] *= 2.0;
    else if (k > m / 2) a[k] = 0.0;
  }
  fft_inplace(a, /*inverse=*/true);
  a.resize(n);
  return a;
}

inline PhaseSeries analytic_phase(const Trajectory& traj, const PhaseOptions& opt = {}) {
  if (traj.size() < kMinPhaseSamples)
    throw ValidationError("phase estimation needs at least " + std::to_string(kMinPhaseSamples) + " samples");
  if (!(opt.edge_discard_frac >= 0.0 && opt.edge_discard_frac < 0.5))
    throw ValidationError("edge discard fraction must lie in [0, 0.5)");
  require_finite(traj, "analytic_phase");

  const auto& s = traj.samples;
  const double mean = std::accumulate(s.begin(), s.end(), 0.0) / static_cast<double>(s.size());
  std::vector<double> centered(s.size());
  double peak = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    centered[i] = s[i] - mean;
    peak = std::max(peak, std::abs(centered[i]));
  }
  if (peak <= 1e-12 * std::max(1.0, std::abs(mean))) throw ValidationError("phase of a constant signal is undefined");

  const auto z = analytic_signal(centered);
  std::vector<double> theta(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) theta[i] = std::arg(z[i]);
  if (opt.protophase_correction) opt.protophase_correction(theta);

  const auto cut = static_cast<std::size_t>(std::floor(opt.edge_discard_frac * static_cast<double>(theta.size())));
  PhaseSeries out;
  out.rate_hz = traj.rate_hz;
  out.values.assign(theta.begin() + static_cast<std::ptrdiff_t>(cut),
                    theta.end() - static_cast<std::ptrdiff_t>(cut));
  return out;
}

inline std::vector<double> unwrap(std::span<const double> phase) {
  std::vector<double> out(phase.begin(), phase.end());
  double shift = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    const double d = phase[i] - phase[i - 1];
    shift -= 2.0 * std::numbers::pi * std::round(d / (2.0 * std::numbers::pi));
    out[i] = phase[i] + shift;
  }
  return out;
}

}  // namespace chronos
