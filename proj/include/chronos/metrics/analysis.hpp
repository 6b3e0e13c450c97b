#pragma once

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <ostream>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include "chronos/core/spline.hpp"
#include "chronos/core/trial_record.hpp"
#include "chronos/metrics/phase.hpp"
#include "chronos/metrics/sync.hpp"

namespace chronos {

inline constexpr double kAnalysisRateHz = 100.0;

struct DyadReport {
  std::size_t first = 0, second = 1;  // phi = theta_first - theta_second
  double rho_d = 0.0;
  double eps = 0.0;  // fraction of the game area; shown x100 as percent
  PhaseSeries phi_series;
  Histogram phi_pdf;
};

struct GroupReport {
  std::vector<double> rho_g_series;
  double rho_g_mean = 0.0;
  double rho_g_std = 0.0;  // over time
  std::vector<std::complex<double>> mean_relative_phasor;
  std::vector<double> mean_relative_phase;
  std::vector<std::vector<double>> rho_d;  // symmetric, diagonal 1
  std::vector<std::vector<bool>> linked;   // topologically connected pairs
};

using TrialReport = std::variant<DyadReport, GroupReport>;

struct AnalysisOptions {
  PhaseOptions phase;
  std::size_t pdf_bins = kDefaultPdfBins;
  double range_dm = kGameAreaDm;
};

namespace detail {

// Resample every player to the analysis rate and cut to the common length.
inline std::vector<Trajectory> aligned_positions(const TrialRecord& rec) {
  std::vector<Trajectory> out;
  out.reserve(rec.players.size());
  for (const auto& p : rec.players) out.push_back(resample_cubic(p.position, kAnalysisRateHz));
  std::size_t n = out.front().size();
  for (const auto& t : out) n = std::min(n, t.size());
  for (auto& t : out) t.samples.resize(n);
  return out;
}

}  // namespace detail

inline TrialReport analyze_trial(const TrialRecord& rec, const AnalysisOptions& opt = {}) {
  const auto& cfg = rec.config;
  if (cfg.trial_type == TrialType::solo) throw ValidationError("solo trials have no coordination metrics");
  if (rec.players.size() != cfg.n_players())
    throw ValidationError("trial record holds " + std::to_string(rec.players.size()) + " players, expected " +
                          std::to_string(cfg.n_players()));

  const auto pos = detail::aligned_positions(rec);
  std::vector<PhaseSeries> phases;
  phases.reserve(pos.size());
  for (const auto& t : pos) phases.push_back(analytic_phase(t, opt.phase));

  if (is_dyadic(cfg.trial_type)) {
    DyadReport r;
    if (cfg.role_of(1) == Role::leader) std::swap(r.first, r.second);
    r.phi_series = relative_phase(phases[r.first], phases[r.second]);
    r.rho_d = dyadic_sync_index(r.phi_series);
    r.eps = rms_position_error(pos[r.first].samples, pos[r.second].samples, opt.range_dm);
    r.phi_pdf = relative_phase_pdf(r.phi_series, opt.pdf_bins);
    return r;
  }

  GroupReport r;
  const GroupSync g = group_sync_series(phases);
  r.rho_g_series = g.rho_g_series;
  r.rho_g_mean = g.rho_g;
  double var = 0.0;
  for (double v : g.rho_g_series) var += (v - g.rho_g) * (v - g.rho_g);
  r.rho_g_std = std::sqrt(var / static_cast<double>(g.rho_g_series.size()));
  r.mean_relative_phasor = g.mean_relative_phasor;
  r.mean_relative_phase = g.mean_relative_phase;

  const std::size_t n = phases.size();
  r.rho_d.assign(n, std::vector<double>(n, 1.0));
  r.linked.assign(n, std::vector<bool>(n, false));
  for (std::size_t h = 0; h < n; ++h)
    for (std::size_t k = h + 1; k < n; ++k) {
      r.rho_d[h][k] = r.rho_d[k][h] = dyadic_sync_index(relative_phase(phases[h], phases[k]));
      r.linked[h][k] = r.linked[k][h] = cfg.topology.linked(h, k);
    }
  return r;
}

// Human-readable tables. Player numbers are 1-based.
inline void write_report_table(std::ostream& out, const TrialReport& report) {
  const auto flags = out.flags();
  out << std::fixed;
  if (const auto* d = std::get_if<DyadReport>(&report)) {
    out << "Dyadic synchronization (phi = theta_" << d->first + 1 << " - theta_" << d->second + 1 << ")\n";
    out << "  rho_d  " << std::setprecision(4) << d->rho_d << "\n";
    out << "  eps    " << std::setprecision(2) << d->eps * 100.0 << " %\n";
    out << "  relative phase PDF (" << d->phi_pdf.density.size() << " bins over [-pi, pi])\n";
    for (std::size_t b = 0; b < d->phi_pdf.density.size(); ++b)
      out << "    " << std::setw(7) << std::setprecision(3) << d->phi_pdf.center(b) << "  " << std::setprecision(4)
          << d->phi_pdf.density[b] << "\n";
  } else {
    const auto& g = std::get<GroupReport>(report);
    const std::size_t n = g.rho_d.size();
    out << "Group synchronization\n";
    out << "  rho_g  " << std::setprecision(4) << g.rho_g_mean << " +/- " << g.rho_g_std << "\n";
    out << "  mean relative phase to group (rad)\n";
    for (std::size_t k = 0; k < n; ++k)
      out << "    " << k + 1 << "  " << std::setw(7) << std::setprecision(4) << g.mean_relative_phase[k] << "\n";
    out << "  pairwise rho_d (* = connected in the topology)\n      ";
    for (std::size_t k = 0; k < n; ++k) out << std::setw(9) << k + 1;
    out << "\n";
    for (std::size_t h = 0; h < n; ++h) {
      out << "    " << std::setw(2) << h + 1;
      for (std::size_t k = 0; k < n; ++k) {
        std::ostringstream cell;
        cell << std::fixed;
        if (h == k) cell << "-";
        else cell << std::setprecision(4) << g.rho_d[h][k] << (g.linked[h][k] ? "*" : " ");
        out << std::setw(9) << cell.str();
      }
      out << "\n";
    }
  }
  out.flags(flags);
}

// One "name value" record per line.
inline void write_report_summary(std::ostream& out, const TrialReport& report) {
  const auto flags = out.flags();
  out << std::setprecision(17);
  if (const auto* d = std::get_if<DyadReport>(&report)) {
    out << "rho_d " << d->rho_d << "\n";
    out << "eps " << d->eps << "\n";
    out << "mean_phasor_angle " << std::arg(mean_phasor(d->phi_series.values)) << "\n";
  } else {
    const auto& g = std::get<GroupReport>(report);
    out << "rho_g " << g.rho_g_mean << "\n";
    out << "rho_g_std " << g.rho_g_std << "\n";
    for (std::size_t k = 0; k < g.mean_relative_phase.size(); ++k)
      out << "phi_bar_" << k + 1 << " " << g.mean_relative_phase[k] << "\n";
    for (std::size_t h = 0; h < g.rho_d.size(); ++h)
      for (std::size_t k = h + 1; k < g.rho_d.size(); ++k)
        out << "rho_d_" << h + 1 << "_" << k + 1 << " " << g.rho_d[h][k] << "\n";
  }
  out.flags(flags);
}

}  // namespace chronos
