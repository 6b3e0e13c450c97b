#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "chronos/metrics/analysis.hpp"
#include "chronos/metrics/phase.hpp"
#include "chronos/metrics/sync.hpp"
#include "oracles.hpp"

using namespace chronos;
using std::numbers::pi;

namespace {

Trajectory wave(double rate_hz, double seconds, auto&& f) {
  Trajectory t{0.0, rate_hz, {}};
  const auto n = static_cast<std::size_t>(std::lround(rate_hz * seconds));
  for (std::size_t k = 0; k < n; ++k) t.samples.push_back(f(static_cast<double>(k) / rate_hz));
  return t;
}

PhaseSeries series(std::vector<double> v) { return {100.0, std::move(v)}; }

std::vector<std::vector<double>> random_phases(std::mt19937_64& rng, std::size_t n, std::size_t steps) {
  std::uniform_real_distribution<double> u(-pi, pi);
  std::vector<std::vector<double>> th(n, std::vector<double>(steps));
  for (auto& row : th)
    for (auto& v : row) v = u(rng);
  return th;
}

std::vector<PhaseSeries> as_series(const std::vector<std::vector<double>>& th) {
  std::vector<PhaseSeries> out;
  for (const auto& row : th) out.push_back(series(row));
  return out;
}

TrialRecord record_of(TrialType type, const std::vector<Trajectory>& players) {
  TrialRecord r;
  r.config.trial_type = type;
  const auto n = players.size();
  r.config.topology = validate_topology(topologies::complete(n), type);
  if (is_dyadic(type)) r.config.roles = {{0, Role::leader}, {1, Role::follower}};
  for (std::size_t i = 0; i < n; ++i) r.players.push_back({i, false, players[i], std::nullopt});
  return r;
}

}  // namespace

TEST(AnalyticPhase, QuadraturePairLeadsByQuarterCycle) {
  const auto c = wave(100.0, 30.0, [](double t) { return std::cos(2 * pi * t); });
  const auto s = wave(100.0, 30.0, [](double t) { return std::sin(2 * pi * t); });
  const auto phi = relative_phase(analytic_phase(c), analytic_phase(s));
  double mean = 0.0;
  for (double v : phi.values) mean += v;
  mean /= static_cast<double>(phi.size());
  EXPECT_NEAR(mean, pi / 2, 0.05);
  EXPECT_EQ(phi.size(), 3000u - 2 * 150u);
}

TEST(AnalyticPhase, InvariantUnderScalingAndOffset) {
  std::mt19937 rng(1);
  std::normal_distribution<double> noise(0.0, 0.1);
  auto base = wave(100.0, 20.0, [&](double t) { return std::sin(2 * pi * 0.3 * t) + 0.3 * std::sin(2 * pi * 0.7 * t) + noise(rng); });
  const auto ref = analytic_phase(base);
  for (double scale : {3.0, 0.25, 12.5}) {
    for (double offset : {0.0, 5.0, -2.5}) {
      Trajectory t = base;
      for (auto& v : t.samples) v = scale * v + offset;
      const auto got = analytic_phase(t);
      ASSERT_EQ(got.size(), ref.size());
      for (std::size_t i = 0; i < got.size(); ++i)
        ASSERT_NEAR(wrap_angle(got.values[i] - ref.values[i]), 0.0, 1e-9) << scale << " " << offset;
    }
  }
}

TEST(AnalyticPhase, SlopeMatchesFrequency) {
  const auto x = wave(100.0, 30.0, [](double t) { return std::sin(2 * pi * 0.5 * t); });
  const auto ph = unwrap(analytic_phase(x).values);
  const double slope = (ph.back() - ph.front()) / (static_cast<double>(ph.size() - 1) / 100.0);
  EXPECT_NEAR(slope, 2 * pi * 0.5, 0.01 * 2 * pi * 0.5);
}

TEST(AnalyticPhase, Errors) {
  EXPECT_THROW(analytic_phase(wave(100.0, 0.5, [](double) { return 1.0; })), ValidationError);
  EXPECT_THROW(analytic_phase(wave(100.0, 5.0, [](double) { return 2.0; })), ValidationError);
}

TEST(AnalyticPhase, CorrectionHookSeesFullSeries) {
  const auto x = wave(100.0, 10.0, [](double t) { return std::sin(2 * pi * t); });
  PhaseOptions opt;
  std::size_t seen = 0;
  opt.protophase_correction = [&](std::vector<double>& th) {
    seen = th.size();
    for (auto& v : th) v = 0.0;
  };
  const auto ph = analytic_phase(x, opt);
  EXPECT_EQ(seen, 1000u);
  for (double v : ph.values) EXPECT_EQ(v, 0.0);
}

TEST(RelativePhase, Examples) {
  EXPECT_EQ(relative_phase(series({0.1, -2.0}), series({0.1, -2.0})).values, (std::vector<double>{0.0, 0.0}));
  const auto q = relative_phase(series({pi / 2 + 0.2, pi / 2 - 1.0}), series({0.2, -1.0}));
  for (double v : q.values) EXPECT_NEAR(v, pi / 2, 1e-15);
  const auto w = relative_phase(series({pi}), series({-0.1}));
  EXPECT_NEAR(w.values[0], -pi + 0.1, 1e-15);
  EXPECT_THROW(relative_phase(series({0.0}), series({0.0, 1.0})), ValidationError);
}

TEST(RelativePhase, AlwaysWrapped) {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-pi, pi);
  for (int i = 0; i < 100000; ++i) {
    const double v = relative_phase(series({u(rng)}), series({u(rng)})).values[0];
    ASSERT_GE(v, -pi);
    ASSERT_LE(v, pi);
  }
}

TEST(DyadicIndex, Examples) {
  EXPECT_NEAR(dyadic_sync_index(series(std::vector<double>(500, 2.3))), 1.0, 1e-15);
  std::vector<double> sweep(1000);
  for (std::size_t i = 0; i < sweep.size(); ++i) sweep[i] = wrap_angle(2 * pi * static_cast<double>(i) / 1000.0);
  EXPECT_LE(dyadic_sync_index(series(sweep)), 1.0 / 1000.0);
  EXPECT_THROW(dyadic_sync_index(series({})), ValidationError);

  std::mt19937_64 rng(4);
  for (int t = 0; t < 50; ++t) {
    auto th = random_phases(rng, 1, 2000);
    for (auto& v : th[0]) v *= 0.4;
    EXPECT_NEAR(dyadic_sync_index(series(th[0])), oracle::dyadic_index(th[0]), 1e-12);
  }
}

TEST(DyadicIndex, Symmetric) {
  std::mt19937_64 rng(12);
  const auto th = random_phases(rng, 2, 3000);
  const auto a = series(th[0]), b = series(th[1]);
  EXPECT_EQ(dyadic_sync_index(relative_phase(a, b)), dyadic_sync_index(relative_phase(b, a)));
}

TEST(RmsError, Examples) {
  const std::vector<double> x{1.0, 2.0, 3.0};
  EXPECT_EQ(rms_position_error(x, x, 10.0), 0.0);
  const std::vector<double> shifted{1.5, 2.5, 3.5};
  EXPECT_NEAR(rms_position_error(shifted, x, 10.0), 0.05, 1e-15);
  std::vector<double> s(4000), z(4000, 0.0);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = std::sin(2 * pi * static_cast<double>(i) / 400.0);
  EXPECT_NEAR(rms_position_error(s, z, 1.0), 1.0 / std::sqrt(2.0), 1e-12);
  EXPECT_THROW(rms_position_error(x, z, 1.0), ValidationError);
  EXPECT_THROW(rms_position_error(x, x, 0.0), ValidationError);
}

TEST(RmsError, TranslationInvariant) {
  std::mt19937 rng(2);
  std::normal_distribution<double> g;
  std::vector<double> a(500), b(500), a2(500), b2(500);
  for (std::size_t i = 0; i < 500; ++i) {
    a[i] = g(rng);
    b[i] = g(rng);
    a2[i] = a[i] + 3.25;
    b2[i] = b[i] + 3.25;
  }
  EXPECT_NEAR(rms_position_error(a, b, 10.0), rms_position_error(a2, b2, 10.0), 1e-14);
}

TEST(ClusterPhase, Examples) {
  const std::vector<double> same(4, 0.8);
  const auto c = cluster_phase(same);
  EXPECT_NEAR(std::abs(c.q), 1.0, 1e-15);
  EXPECT_NEAR(c.angle, 0.8, 1e-15);

  const std::vector<double> quarter{0.0, pi / 2};
  const auto q = cluster_phase(quarter);
  EXPECT_NEAR(q.q.real(), 0.5, 1e-15);
  EXPECT_NEAR(q.q.imag(), 0.5, 1e-15);
  EXPECT_NEAR(q.angle, pi / 4, 1e-15);

  const std::vector<double> opposite{pi / 2, -pi / 2};
  const auto o = cluster_phase(opposite);
  EXPECT_TRUE(o.degenerate);
  EXPECT_EQ(o.angle, 0.0);
  EXPECT_THROW(cluster_phase(std::vector<double>{1.0}), ValidationError);
}

TEST(GroupSync, ConstantOffsetsGiveFullSync) {
  std::vector<std::vector<double>> th(5, std::vector<double>(1000));
  const double offsets[] = {0.0, 0.7, -1.2, 2.0, 0.3};
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t t = 0; t < 1000; ++t) th[k][t] = wrap_angle(0.05 * static_cast<double>(t) + offsets[k]);
  const auto g = group_sync_series(as_series(th));
  for (double r : g.rho_g_series) ASSERT_NEAR(r, 1.0, 1e-12);
  EXPECT_NEAR(g.rho_g, 1.0, 1e-12);
}

TEST(GroupSync, AntiphaseDeviationsCancel) {
  // With phi-bar zero, two agents deviating by pi cancel exactly.
  const std::complex<double> sum = std::polar(1.0, 0.0) + std::polar(1.0, pi);
  EXPECT_NEAR(std::abs(sum) / 2.0, 0.0, 1e-15);
}

TEST(GroupSync, MatchesLoopOracle) {
  std::mt19937_64 rng(99);
  std::normal_distribution<double> jitter(0.0, 0.6);
  // Partly coherent: common drift plus jitter, so rho values are spread out.
  std::vector<std::vector<double>> th(5, std::vector<double>(3000));
  for (std::size_t k = 0; k < 5; ++k)
    for (std::size_t t = 0; t < 3000; ++t) th[k][t] = wrap_angle(0.03 * static_cast<double>(t) + 0.4 * k + jitter(rng));
  const auto g = group_sync_series(as_series(th));
  const auto o = oracle::group_index(th);
  for (std::size_t t = 0; t < 3000; ++t) ASSERT_NEAR(g.rho_g_series[t], o.rho_t[t], 1e-12);
  EXPECT_NEAR(g.rho_g, o.rho, 1e-12);

  const auto r = random_phases(rng, 4, 3000);
  EXPECT_NEAR(group_sync_series(as_series(r)).rho_g, oracle::group_index(r).rho, 1e-12);
}

TEST(GroupSync, InvariantUnderCommonShift) {
  std::mt19937_64 rng(31);
  std::normal_distribution<double> jitter(0.0, 0.5);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> th(6, std::vector<double>(1500));
    for (auto& row : th)
      for (std::size_t t = 0; t < row.size(); ++t) row[t] = wrap_angle(0.02 * static_cast<double>(t) + jitter(rng));
    const double base = group_sync_series(as_series(th)).rho_g;
    auto shifted = th;
    for (auto& row : shifted)
      for (std::size_t t = 0; t < row.size(); ++t) row[t] = wrap_angle(row[t] + 1.7 * std::sin(0.01 * static_cast<double>(t)));
    EXPECT_NEAR(group_sync_series(as_series(shifted)).rho_g, base, 1e-9);
  }
}

// Per-agent offsets move the cluster phase by a constant only when the agents
// share a common phase trajectory; then phi-bar absorbs them exactly. With
// independent jitter the cluster phase shifts by a time-varying amount and
// rho_g changes slightly.
TEST(GroupSync, PerAgentOffsetsOnCommonTrajectory) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> off(-pi, pi), c0(-1.0, 1.0);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<std::vector<double>> th(5, std::vector<double>(1500));
    std::vector<double> base_offset(5);
    for (auto& b : base_offset) b = c0(rng);
    for (std::size_t k = 0; k < 5; ++k)
      for (std::size_t t = 0; t < 1500; ++t)
        th[k][t] = wrap_angle(0.02 * static_cast<double>(t) + std::sin(0.003 * static_cast<double>(t)) + base_offset[k]);
    const double base = group_sync_series(as_series(th)).rho_g;
    for (auto& row : th) {
      const double c = off(rng);
      for (auto& v : row) v = wrap_angle(v + c);
    }
    EXPECT_NEAR(group_sync_series(as_series(th)).rho_g, base, 1e-9);
  }
}

TEST(GroupSync, PerAgentOffsetsOnJitteredPhasesNearlyInvariant) {
  std::mt19937_64 rng(33);
  std::normal_distribution<double> jitter(0.0, 0.3);
  std::uniform_real_distribution<double> off(-pi, pi);
  std::vector<std::vector<double>> th(5, std::vector<double>(3000));
  for (auto& row : th)
    for (std::size_t t = 0; t < row.size(); ++t) row[t] = wrap_angle(0.02 * static_cast<double>(t) + jitter(rng));
  const double base = group_sync_series(as_series(th)).rho_g;
  for (auto& row : th) {
    const double c = off(rng);
    for (auto& v : row) v = wrap_angle(v + c);
  }
  EXPECT_NEAR(group_sync_series(as_series(th)).rho_g, base, 1e-2);
}

TEST(GroupSync, Preconditions) {
  EXPECT_THROW(group_sync_series(as_series({{0.0}, {0.0}})), ValidationError);
  EXPECT_THROW(group_sync_series(as_series({{0.0}, {0.0}, {0.0, 1.0}})), ValidationError);
}

TEST(PhasePdf, ConstantSeriesFillsOneBin) {
  const auto h = relative_phase_pdf(series(std::vector<double>(100, 0.5)));
  ASSERT_EQ(h.density.size(), kDefaultPdfBins);
  int nonzero = 0;
  double mass = 0.0;
  for (double d : h.density) {
    nonzero += d > 0.0;
    mass += d * h.bin_width;
  }
  EXPECT_EQ(nonzero, 1);
  EXPECT_NEAR(mass, 1.0, 1e-9);
}

TEST(PhasePdf, UniformSweepIsFlat) {
  std::vector<double> v(10000);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = -pi + 2 * pi * (static_cast<double>(i) + 0.5) / 10000.0;
  const auto h = relative_phase_pdf(series(v), 24);
  const auto [lo, hi] = std::minmax_element(h.density.begin(), h.density.end());
  EXPECT_LT(*hi / *lo, 1.2);
  double mass = 0.0;
  for (double d : h.density) mass += d * h.bin_width;
  EXPECT_NEAR(mass, 1.0, 1e-9);
  EXPECT_THROW(relative_phase_pdf(series({}), 24), ValidationError);
  EXPECT_THROW(relative_phase_pdf(series({0.0}), 4), ValidationError);
}

TEST(AnalyzeTrial, IdenticalDyad) {
  const auto x = wave(10.0, 30.0, [](double t) { return 5.0 + 2.0 * std::sin(2 * pi * 0.25 * t); });
  const auto rep = analyze_trial(record_of(TrialType::dyadic_hp_hp, {x, x}));
  const auto& d = std::get<DyadReport>(rep);
  EXPECT_EQ(d.rho_d, 1.0);
  EXPECT_EQ(d.eps, 0.0);
}

TEST(AnalyzeTrial, ConstantOffsetEnsemble) {
  std::vector<Trajectory> players;
  for (int k = 0; k < 5; ++k)
    players.push_back(wave(10.0, 30.0, [k](double t) { return 5.0 + 2.0 * std::sin(2 * pi * 0.25 * t + 0.6 * k); }));
  const auto rep = analyze_trial(record_of(TrialType::group, players));
  const auto& g = std::get<GroupReport>(rep);
  EXPECT_NEAR(g.rho_g_mean, 1.0, 1e-2);
  for (std::size_t h = 0; h < 5; ++h)
    for (std::size_t k = 0; k < 5; ++k) EXPECT_EQ(g.rho_d[h][k], g.rho_d[k][h]);
}

TEST(AnalyzeTrial, LeaderIsFirstInRelativePhase) {
  const auto lead = wave(10.0, 30.0, [](double t) { return 5.0 + std::sin(2 * pi * 0.25 * t + 0.5); });
  const auto follow = wave(10.0, 30.0, [](double t) { return 5.0 + std::sin(2 * pi * 0.25 * t); });
  auto rec = record_of(TrialType::dyadic_hp_hp, {follow, lead});
  rec.config.roles = {{0, Role::follower}, {1, Role::leader}};
  const auto& d = std::get<DyadReport>(analyze_trial(rec));
  EXPECT_EQ(d.first, 1u);
  EXPECT_NEAR(std::arg(mean_phasor(d.phi_series.values)), 0.5, 0.02);
}

TEST(AnalyzeTrial, ReportFormatting) {
  std::vector<Trajectory> players;
  for (int k = 0; k < 3; ++k)
    players.push_back(wave(10.0, 30.0, [k](double t) { return 5.0 + std::sin(2 * pi * 0.25 * t + 0.3 * k); }));
  auto rec = record_of(TrialType::group, players);
  rec.config.topology = validate_topology(topologies::path(3), TrialType::group);
  const auto rep = analyze_trial(rec);
  std::ostringstream table, summary;
  write_report_table(table, rep);
  write_report_summary(summary, rep);
  EXPECT_NE(table.str().find("*"), std::string::npos);
  EXPECT_NE(summary.str().find("rho_g "), std::string::npos);
  EXPECT_NE(summary.str().find("rho_d_1_3 "), std::string::npos);
}
