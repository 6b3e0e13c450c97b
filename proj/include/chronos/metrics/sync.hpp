#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <span>
#include <vector>

#include "chronos/core/trajectory.hpp"
#include "chronos/error.hpp"

namespace chronos {

inline constexpr double kDegenerateClusterModulus = 1e-12;
inline constexpr std::size_t kDefaultPdfBins = 24;

// Wrapped difference h - k. Under the leader-follower convention h is the
// leader, so positive values mean the leader is ahead.
inline PhaseSeries relative_phase(const PhaseSeries& h, const PhaseSeries& k) {
  if (h.size() != k.size() || h.rate_hz != k.rate_hz)
    throw ValidationError("relative phase needs series of equal length and rate");
  PhaseSeries out;
  out.rate_hz = h.rate_hz;
  out.values.resize(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) out.values[i] = wrap_angle(h.values[i] - k.values[i]);
  return out;
}

// |z| without hypot's overflow guards; inputs here are bounded by the agent count.
inline double modulus(std::complex<double> z) { return std::sqrt(std::norm(z)); }

inline std::complex<double> mean_phasor(std::span<const double> phases) {
  std::complex<double> acc = 0.0;
  for (double p : phases) acc += std::polar(1.0, p);
  return acc / static_cast<double>(phases.size());
}

// Mean resultant length of the relative phase.
inline double dyadic_sync_index(const PhaseSeries& phi) {
  if (phi.empty()) throw ValidationError("dyadic synchronization index of an empty series");
  return std::min(1.0, modulus(mean_phasor(phi.values)));
}

// RMS position mismatch normalized by the admissible range L.
inline double rms_position_error(std::span<const double> xh, std::span<const double> xk, double range_dm) {
  if (xh.size() != xk.size()) throw ValidationError("position error needs series of equal length");
  if (!(range_dm > 0.0)) throw ValidationError("position range must be positive");
  if (xh.empty()) throw ValidationError("position error of empty series");
  double acc = 0.0;
  for (std::size_t i = 0; i < xh.size(); ++i) {
    const double d = xh[i] - xk[i];
    acc += d * d;
  }
  return std::sqrt(acc / static_cast<double>(xh.size())) / range_dm;
}

struct ClusterPhase {
  std::complex<double> q;  // complex order parameter
  double angle = 0.0;      // group phase, 0 when degenerate
  bool degenerate = false;
};

inline ClusterPhase cluster_phase(std::span<const double> thetas) {
  if (thetas.size() < 2) throw ValidationError("cluster phase needs at least 2 agents");
  ClusterPhase c;
  c.q = mean_phasor(thetas);
  c.degenerate = modulus(c.q) < kDegenerateClusterModulus;
  c.angle = c.degenerate ? 0.0 : std::atan2(c.q.imag(), c.q.real());
  return c;
}

struct GroupSync {
  std::vector<double> rho_g_series;
  double rho_g = 0.0;
  std::vector<std::complex<double>> mean_relative_phasor;  // per agent, complex form
  std::vector<double> mean_relative_phase;                 // per agent, angle form
  std::size_t degenerate_frames = 0;
};

// phases[k] is agent k's phase series; all must share length and rate.
inline GroupSync group_sync_series(std::span<const PhaseSeries> phases) {
  const std::size_t n = phases.size();
  if (n < 3) throw ValidationError("group synchronization needs at least 3 agents");
  const std::size_t steps = phases[0].size();
  for (const auto& p : phases)
    if (p.size() != steps || p.rate_hz != phases[0].rate_hz)
      throw ValidationError("group synchronization needs series of equal length and rate");
  if (steps == 0) throw ValidationError("group synchronization of empty series");

  GroupSync g;
  // phi[t * n + k] = exp(j * (theta_k(t) - q(t)))
  std::vector<std::complex<double>> phi(steps * n);
  g.mean_relative_phasor.assign(n, 0.0);
  for (std::size_t t = 0; t < steps; ++t) {
    // exp(j(theta_k - q)) = exp(j theta_k) * conj(q') / |q'|
    std::complex<double> q = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      phi[t * n + k] = std::polar(1.0, phases[k].values[t]);
      q += phi[t * n + k];
    }
    q /= static_cast<double>(n);
    const double mod = modulus(q);
    const bool degenerate = mod < kDegenerateClusterModulus;
    if (degenerate) ++g.degenerate_frames;
    const std::complex<double> unrotate = degenerate ? 1.0 : std::conj(q) / mod;
    for (std::size_t k = 0; k < n; ++k) {
      phi[t * n + k] *= unrotate;
      g.mean_relative_phasor[k] += phi[t * n + k];
    }
  }

  g.mean_relative_phase.resize(n);
  std::vector<std::complex<double>> undo(n);
  for (std::size_t k = 0; k < n; ++k) {
    g.mean_relative_phasor[k] /= static_cast<double>(steps);
    const auto& z = g.mean_relative_phasor[k];
    g.mean_relative_phase[k] = std::atan2(z.imag(), z.real());
    undo[k] = std::polar(1.0, -g.mean_relative_phase[k]);
  }

  g.rho_g_series.resize(steps);
  double total = 0.0;
  for (std::size_t t = 0; t < steps; ++t) {
    std::complex<double> acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) acc += phi[t * n + k] * undo[k];
    const double r = std::min(1.0, modulus(acc) / static_cast<double>(n));
    g.rho_g_series[t] = r;
    total += r;
  }
  g.rho_g = total / static_cast<double>(steps);
  return g;
}

struct Histogram {
  double lo = -std::numbers::pi;
  double bin_width = 0.0;
  std::vector<double> density;  // sum(density) * bin_width == 1

  double center(std::size_t b) const { return lo + (static_cast<double>(b) + 0.5) * bin_width; }
};

inline Histogram relative_phase_pdf(const PhaseSeries& phi, std::size_t n_bins = kDefaultPdfBins) {
  if (phi.empty()) throw ValidationError("phase histogram of an empty series");
  if (n_bins < 8) throw ValidationError("phase histogram needs at least 8 bins");
  Histogram h;
  h.bin_width = 2.0 * std::numbers::pi / static_cast<double>(n_bins);
  std::vector<std::size_t> counts(n_bins, 0);
  for (double v : phi.values) {
    auto b = static_cast<long>(std::floor((v - h.lo) / h.bin_width));
    b = std::clamp<long>(b, 0, static_cast<long>(n_bins) - 1);
    ++counts[static_cast<std::size_t>(b)];
  }
  h.density.resize(n_bins);
  const double norm = static_cast<double>(phi.size()) * h.bin_width;
  for (std::size_t b = 0; b < n_bins; ++b) h.density[b] = static_cast<double>(counts[b]) / norm;
  return h;
}

}  // namespace chronos
