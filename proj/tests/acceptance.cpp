// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fail.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <future>
#include <numbers>
#include <random>
#include <regex>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "analogues.hpp"
#include "chronos/dynamics/control.hpp"
#include "chronos/dynamics/integrator.hpp"
#include "chronos/io/signature_store.hpp"
#include "chronos/io/trial_files.hpp"
#include "chronos/metrics/analysis.hpp"
#include "chronos/metrics/phase.hpp"
#include "chronos/metrics/sync.hpp"
#include "chronos/net/websocket.hpp"
#include "chronos/server/hub.hpp"
#include "chronos/server/session.hpp"
#include "oracles.hpp"
#include "scripted_client.hpp"
#include "temp_dir.hpp"

using namespace chronos;
using std::numbers::pi;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

class Clock {
 public:
  double seconds() const { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0_).count(); }

 private:
  std::chrono::steady_clock::time_point t0_ = std::chrono::steady_clock::now();
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

PhaseSeries series(std::vector<double> v) { return {100.0, std::move(v)}; }

std::vector<PhaseSeries> as_series(const std::vector<std::vector<double>>& th) {
  std::vector<PhaseSeries> out;
  for (const auto& row : th) out.push_back(series(row));
  return out;
}

// Half uniform noise, half a common drift with per-agent offsets and jitter of
// random strength, so the indices cover the whole of [0, 1].
std::vector<std::vector<double>> random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t steps) {
  std::vector<std::vector<double>> th(n, std::vector<double>(steps));
  std::uniform_real_distribution<double> u(-pi, pi);
  if (std::bernoulli_distribution(0.5)(rng)) {
    for (auto& row : th)
      for (auto& v : row) v = u(rng);
    return th;
  }
  const double rate = std::uniform_real_distribution<double>(0.005, 0.05)(rng);
  std::normal_distribution<double> jitter(0.0, std::uniform_real_distribution<double>(0.0, 2.0)(rng));
  for (auto& row : th) {
    const double off = u(rng);
    for (std::size_t t = 0; t < steps; ++t) row[t] = wrap_angle(rate * static_cast<double>(t) + off + jitter(rng));
  }
  return th;
}

// ---------------------------------------------------------------------------

Outcome metrics_formulas() {
  constexpr std::size_t kMatrices = 10000, kSteps = 3000;
  Clock clock;
  struct Worst {
    double series = 0, mean = 0, dyad = 0;
    bool in_range = true, symmetric = true;
  };
  const unsigned workers = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::future<Worst>> jobs;
  for (unsigned w = 0; w < workers; ++w)
    jobs.push_back(std::async(std::launch::async, [w, workers] {
      Worst r;
      std::mt19937_64 rng(1000 + w);
      std::uniform_int_distribution<std::size_t> size(3, 7);
      for (std::size_t m = w; m < kMatrices; m += workers) {
        const auto th = random_matrix(rng, size(rng), kSteps);
        const auto g = group_sync_series(as_series(th));
        const auto o = oracle::group_index(th);
        for (std::size_t t = 0; t < kSteps; ++t) {
          r.series = std::max(r.series, std::abs(g.rho_g_series[t] - o.rho_t[t]));
          r.in_range = r.in_range && g.rho_g_series[t] >= 0.0 && g.rho_g_series[t] <= 1.0;
        }
        r.mean = std::max(r.mean, std::abs(g.rho_g - o.rho));
        r.in_range = r.in_range && g.rho_g >= 0.0 && g.rho_g <= 1.0;

        const auto h = m % th.size(), k = (m + 1) % th.size();
        const double hk = dyadic_sync_index(relative_phase(series(th[h]), series(th[k])));
        const double kh = dyadic_sync_index(relative_phase(series(th[k]), series(th[h])));
        std::vector<double> diff(kSteps);
        for (std::size_t t = 0; t < kSteps; ++t) diff[t] = th[h][t] - th[k][t];
        r.dyad = std::max(r.dyad, std::abs(hk - oracle::dyadic_index(diff)));
        r.symmetric = r.symmetric && hk == kh;
        r.in_range = r.in_range && hk >= 0.0 && hk <= 1.0;
      }
      return r;
    }));
  Worst all;
  for (auto& j : jobs) {
    const auto r = j.get();
    all.series = std::max(all.series, r.series);
    all.mean = std::max(all.mean, r.mean);
    all.dyad = std::max(all.dyad, r.dyad);
    all.in_range = all.in_range && r.in_range;
    all.symmetric = all.symmetric && r.symmetric;
  }
  const double secs = clock.seconds();
  return {all.series <= 1e-12 && all.mean <= 1e-12 && all.dyad <= 1e-12 && all.in_range && all.symmetric && secs < 30.0,
          fmt("%zu matrices; max |diff| rho_g(t) %.1e, rho_g %.1e, rho_d %.1e; in [0,1]: %s; rho_d symmetric: %s; %.1f s",
              kMatrices, all.series, all.mean, all.dyad, all.in_range ? "yes" : "no", all.symmetric ? "yes" : "no", secs)};
}

Outcome invariance() {
  std::mt19937_64 rng(4242);
  std::uniform_real_distribution<double> u(-pi, pi);
  std::uniform_int_distribution<std::size_t> size(3, 7);
  constexpr int kCases = 200;
  constexpr std::size_t kSteps = 1500;

  // Generic ensembles: common drift, per-agent start offsets, independent jitter.
  auto ensemble = [&](std::size_t n, double jitter_std) {
    std::normal_distribution<double> jitter(0.0, jitter_std);
    std::vector<std::vector<double>> th(n, std::vector<double>(kSteps));
    for (auto& row : th) {
      const double off = u(rng);
      for (std::size_t t = 0; t < kSteps; ++t)
        row[t] = wrap_angle(0.02 * static_cast<double>(t) + std::sin(0.003 * static_cast<double>(t)) + off + jitter(rng));
    }
    return th;
  };

  double common_shift = 0.0, offsets_generic = 0.0, offsets_shared = 0.0;
  for (int c = 0; c < kCases; ++c) {
    const std::size_t n = size(rng);
    const double jitter_std = c % 2 ? 0.5 : 0.0;  // even cases share one trajectory
    auto th = ensemble(n, jitter_std);
    const double base = group_sync_series(as_series(th)).rho_g;

    auto shifted = th;
    const double a = u(rng), w = 0.001 + 0.02 * std::abs(u(rng));
    for (auto& row : shifted)
      for (std::size_t t = 0; t < kSteps; ++t) row[t] = wrap_angle(row[t] + a * std::sin(w * static_cast<double>(t)) + 0.01 * t);
    common_shift = std::max(common_shift, std::abs(group_sync_series(as_series(shifted)).rho_g - base));

    auto offset = th;
    for (auto& row : offset) {
      const double k = u(rng);
      for (auto& v : row) v = wrap_angle(v + k);
    }
    const double d = std::abs(group_sync_series(as_series(offset)).rho_g - base);
    (jitter_std > 0.0 ? offsets_generic : offsets_shared) = std::max(jitter_std > 0.0 ? offsets_generic : offsets_shared, d);
  }

  // Analytic phase under positive scaling and mean offset.
  double scaling = 0.0;
  std::normal_distribution<double> noise(0.0, 0.2);
  for (int c = 0; c < 50; ++c) {
    Trajectory x{0.0, 100.0, {}};
    for (int k = 0; k < 3000; ++k) x.samples.push_back(std::sin(2 * pi * 0.25 * k / 100.0) + noise(rng));
    Trajectory y = x;
    const double s = 0.1 + 5.0 * std::abs(u(rng)), b = 10.0 * u(rng);
    for (auto& v : y.samples) v = s * v + b;
    const auto p = analytic_phase(x), q = analytic_phase(y);
    for (std::size_t k = 0; k < p.size(); ++k) scaling = std::max(scaling, std::abs(wrap_angle(p.values[k] - q.values[k])));
  }

  bool wrapped = true;
  std::uniform_real_distribution<double> wide(-1e4, 1e4);
  for (int c = 0; c < 100000; ++c) {
    const auto r = relative_phase(series({wide(rng)}), series({wide(rng)}));
    wrapped = wrapped && r.values[0] >= -pi && r.values[0] <= pi;
  }
  for (const double e : {pi, -pi, 3 * pi, -3 * pi, 0.0}) {
    const auto r = relative_phase(series({e}), series({0.0}));
    wrapped = wrapped && r.values[0] >= -pi && r.values[0] <= pi;
  }

  const bool pass = common_shift <= 1e-9 && offsets_shared <= 1e-9 && offsets_generic <= 1e-9 && scaling <= 1e-9 && wrapped;
  return {pass, fmt("max |d rho_g|: common shift %.1e, per-agent offsets %.1e (shared trajectory) / %.1e (independent "
                    "jitter); analytic phase scaling/offset %.1e; relative phase wrapped: %s",
                    common_shift, offsets_shared, offsets_generic, scaling, wrapped ? "yes" : "no")};
}

Outcome hilbert_pipeline() {
  Trajectory c{0.0, 100.0, {}}, s{0.0, 100.0, {}};
  for (int k = 0; k < 3000; ++k) {
    c.samples.push_back(std::cos(2 * pi * 0.25 * k / 100.0));
    s.samples.push_back(std::sin(2 * pi * 0.25 * k / 100.0));
  }
  const auto phi = relative_phase(analytic_phase(c), analytic_phase(s));  // interior 90%
  const double mean = std::arg(mean_phasor(phi.values));

  TrialConfig cfg = analogues::group_of(topologies::complete(5), 30.0);
  std::map<std::size_t, sim::ScriptedPlayer> scripted;
  for (std::size_t i = 0; i < 5; ++i) scripted[i] = sim::ScriptedPlayer{sim::Sinusoid{2.0, 0.25, 0.6 * static_cast<double>(i)}, 0.0, i};
  const auto r = sim::run_headless(cfg, scripted, 1);
  const double rho = sim::group_index_of(r);

  return {std::abs(mean - pi / 2) <= 0.05 && rho >= 0.99,
          fmt("cos vs sin mean relative phase %.4f rad (target pi/2 = %.4f); offset 5-sinusoid trial rho_g %.4f", mean,
              pi / 2, rho)};
}

DynamicsParams hkb_params(double alpha, double beta, double gamma, double omega) {
  DynamicsParams p;
  p.model = DynamicsModel::hkb;
  p.alpha = alpha;
  p.beta = beta;
  p.gamma = gamma;
  p.omega = omega;
  return p;
}

ControllerParams no_control() {
  ControllerParams c;
  c.kp = c.ksigma = 0.0;
  return c;
}

CouplingInput zero_input() {
  CouplingInput in;
  in.sigma = 0.0;
  in.sigma_dot = 0.0;
  return in;
}

double harmonic_error(double omega, double dt, double horizon) {
  DynamicsParams dyn;
  dyn.model = DynamicsModel::harmonic;
  dyn.a = 0.0;
  dyn.b = omega * omega;
  VpState st{1.0, 0.0};
  double worst = 0.0;
  const auto steps = static_cast<int>(std::lround(horizon / dt));
  for (int i = 1; i <= steps; ++i) {
    st = step_vp(st, dyn, no_control(), zero_input(), dt);
    worst = std::max(worst, std::abs(st.x - std::cos(omega * i * dt)));
  }
  return worst;
}

Outcome dynamics() {
  Clock clock;
  const double omega = 2 * pi * 0.5;
  const double ratio = harmonic_error(omega, 0.010, 10.0) / harmonic_error(omega, 0.005, 10.0);

  const auto dyn = hkb_params(1, 1, 1, 2 * pi * 0.25);
  VpState st{1.0, 0.0};
  std::vector<double> xs;
  double peak = 0.0;
  bool finite = true;
  for (int k = 0; k < 6000; ++k) {
    st = step_vp(st, dyn, no_control(), zero_input(), 0.01);
    finite = finite && std::isfinite(st.x);
    peak = std::max(peak, std::abs(st.x));
    xs.push_back(st.x);
  }
  const double f = oracle::dominant_frequency(xs, 100.0, 2.0);

  std::mt19937_64 rng(2025);
  std::uniform_real_distribution<double> u(-3.0, 3.0), g(0.0, 3.0), ad(0.01, 3.0);
  std::bernoulli_distribution sign;
  double worst = 0.0;
  auto rel = [](double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); };
  for (int i = 0; i < 10000; ++i) {
    const auto d = hkb_params(g(rng), g(rng), g(rng), 0.1 + g(rng));
    ControllerParams p;
    p.controller = ControllerKind::adaptive;
    p.c = g(rng);
    p.delta = 0.01 + g(rng);
    p.k = g(rng);
    const VpState s{u(rng), u(rng), (sign(rng) ? 1 : -1) * ad(rng), (sign(rng) ? 1 : -1) * ad(rng)};
    CouplingInput in;
    in.y_bar = u(rng);
    in.ydot_bar = u(rng);
    in.sigma = u(rng);
    in.sigma_dot = u(rng);
    const double fx = oracle::hkb_field(s.x, s.v, d.alpha, d.beta, d.gamma, d.omega);
    p.mode = VpMode::follower;
    const auto fo = control_adaptive_follower(s, in, p, d);
    const auto fr = oracle::adaptive_follower(s.x, s.v, in.y_bar, in.ydot_bar, s.psi, s.chi, p.c, p.delta, fx);
    p.mode = VpMode::leader;
    const auto lo = control_adaptive_leader(s, in, p, d);
    const auto lr = oracle::adaptive_leader(s.x, s.v, in.y_bar, *in.sigma, *in.sigma_dot, s.psi, s.chi, p.c, p.delta, p.k, fx);
    worst = std::max({worst, rel(fo.u, fr.u), rel(fo.psi_dot, fr.psi_dot), rel(fo.chi_dot, fr.chi_dot), rel(lo.u, lr.u),
                      rel(lo.psi_dot, lr.psi_dot), rel(lo.chi_dot, lr.chi_dot)});
  }
  const double secs = clock.seconds();
  const bool pass = ratio >= 12.0 && ratio <= 20.0 && finite && peak < 5.0 && std::abs(f - 0.25) <= 0.025 &&
                    worst <= 1e-12 && secs < 60.0;
  return {pass, fmt("RK4 error ratio %.2f; HKB free run max |x| %.3f, peak %.4f Hz; adaptive laws max rel diff %.1e "
                    "on 1e4 states; %.1f s",
                    ratio, peak, f, worst, secs)};
}

// Real server, real sockets, every player a scripted client.
Outcome routing() {
  Clock clock;
  TempDir dir;
  Hub hub({dir.path(), 10.0});
  const auto listener = net::serve_hub(hub, "127.0.0.1", 0);
  const int port = listener->port();
  auto tcp = [port] { return std::make_shared<net::LineConnection>(net::connect_tcp("127.0.0.1", port)); };

  std::mt19937_64 rng(77);
  std::bernoulli_distribution edge(0.45);
  std::uniform_int_distribution<std::size_t> size(3, 7);
  auto random_topology = [&](std::size_t n) {
    while (true) {
      Topology::Matrix m(n, std::vector<bool>(n, false));
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) m[i][j] = i != j && edge(rng);
      try {
        (void)validate_topology(m, TrialType::group);
        return m;
      } catch (const ValidationError&) {
      }
    }
  };

  constexpr int kTopologies = 200, kBatch = 25;
  std::size_t frames = 0, mismatched = 0, leaked = 0, incomplete = 0;
  auto admin = tcp();
  for (int start = 0; start < kTopologies; start += kBatch) {
    struct Running {
      Topology::Matrix m;
      std::vector<std::future<scripted::ClientLog>> players;
    };
    std::vector<Running> batch;
    for (int b = 0; b < kBatch; ++b) {
      Running r{random_topology(size(rng)), {}};
      TrialConfig cfg = analogues::group_of(r.m, 0.2);
      cfg.trial_number = start + b + 1;
      admin->send(wire::encode(wire::Create{serialize_trial_config(cfg)}));
      const auto reply = wire::parse_server(admin->read_message().value());
      if (reply.t != "created") return {false, "create failed: " + reply.body.dump()};
      const std::string id = reply.body["session"];
      for (int i = 1; i <= static_cast<int>(r.m.size()); ++i)
        r.players.push_back(std::async(std::launch::async, [&tcp, id, i] { return scripted::play(tcp(), id, i); }));
      batch.push_back(std::move(r));
    }
    for (auto& r : batch)
      for (std::size_t i = 0; i < r.players.size(); ++i) {
        const auto log = r.players[i].get();
        if (log.end_reason != "complete" || log.frames.empty()) ++incomplete;
        std::set<int> want;
        for (std::size_t j = 0; j < r.m.size(); ++j)
          if (r.m[i][j]) want.insert(static_cast<int>(j + 1));
        for (const auto& f : log.frames) {
          ++frames;
          std::set<int> got;
          for (const auto& [j, x] : f.peers) {
            got.insert(j);
            if (!want.count(j)) ++leaked;
          }
          if (got != want || got.size() != f.peers.size()) ++mismatched;
        }
      }
  }
  const double secs = clock.seconds();
  return {mismatched == 0 && leaked == 0 && incomplete == 0 && secs < 60.0,
          fmt("%d topologies over TCP, %zu frames checked; mismatched %zu, leaked entries %zu, incomplete clients %zu; "
              "%.1f s",
              kTopologies, frames, mismatched, leaked, incomplete, secs)};
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Every line "<ms> <x>[ <v>]\n", ms starting at 0 on a constant integer step.
bool layout_ok(const std::string& text, int columns) {
  static const std::regex two(R"((\d+) (-?\d+(\.\d+)?(e-?\d+)?))"), three(R"((\d+) (-?\d+(\.\d+)?(e-?\d+)?) (-?\d+(\.\d+)?(e-?\d+)?))");
  std::istringstream in(text);
  std::string line;
  long prev = -1, step = -1;
  std::size_t n = 0;
  while (std::getline(in, line)) {
    std::smatch m;
    if (!std::regex_match(line, m, columns == 3 ? three : two)) return false;
    const long ms = std::stol(m[1]);
    if (prev < 0 && ms != 0) return false;
    if (prev >= 0) {
      if (step < 0) step = ms - prev;
      if (ms - prev != step || step <= 0) return false;
    }
    prev = ms;
    ++n;
  }
  return n > 0 && text.back() == '\n';
}

Outcome file_goldens() {
  TempDir dir;
  std::vector<std::string> problems;
  auto expect_file = [&](const std::string& name, int columns) {
    const auto p = dir / name;
    if (!fs::exists(p)) problems.push_back(name + " missing");
    else if (!layout_ok(slurp(p), columns)) problems.push_back(name + " layout");
  };
  sim::RunOptions opt;
  opt.out_dir = dir.path();
  opt.analyze = false;

  TrialConfig solo;
  solo.trial_type = TrialType::solo;
  solo.duration_s = 2.0;
  solo.topology = validate_topology(topologies::empty(1), TrialType::solo);
  solo.solo_owner = "Sample";
  solo.solo_kind = MotionKind::free;
  solo.trial_number = 3;
  sim::run_headless(solo, {{0, sim::ScriptedPlayer{sim::Sinusoid{}, 0.0, 0}}}, 1, opt);
  expect_file("P1_03_Sample_free_1d.txt", 3);

  TrialConfig dyad;
  dyad.trial_type = TrialType::dyadic_hp_hp;
  dyad.duration_s = 2.0;
  dyad.topology = validate_topology(topologies::complete(2), dyad.trial_type);
  dyad.roles = {{0, Role::leader}, {1, Role::follower}};
  dyad.trial_number = 3;
  sim::run_headless(dyad, {{0, sim::ScriptedPlayer{}}, {1, sim::ScriptedPlayer{}}}, 1, opt);
  expect_file("P2_03_L_1d.txt", 2);
  expect_file("P2_03_F_1d.txt", 2);

  TrialConfig group = analogues::group_of(topologies::ring(5), 2.0);
  group.trial_number = 2;
  std::map<std::size_t, sim::ScriptedPlayer> five;
  for (std::size_t i = 0; i < 5; ++i) five[i] = sim::ScriptedPlayer{};
  sim::run_headless(group, five, 1, opt);
  for (int i = 1; i <= 5; ++i) expect_file("P5_02_" + std::to_string(i) + "_1d.txt", 2);

  // Byte-exact rendering of known values.
  PlayerRecord two{0, false, Trajectory{0.0, 10.0, {5.0, 5.25, 4.5}}, std::nullopt};
  write_player_file(dir / "two.txt", two);
  if (slurp(dir / "two.txt") != "0 5\n100 5.25\n200 4.5\n") problems.push_back("two-column bytes");
  PlayerRecord three = two;
  three.velocity = Trajectory{0.0, 10.0, {0.0, -1.5, 2.0}};
  write_player_file(dir / "three.txt", three);
  if (slurp(dir / "three.txt") != "0 5 0\n100 5.25 -1.5\n200 4.5 2\n") problems.push_back("three-column bytes");

  // Signature store round trip.
  SignatureStore store(dir / "sig");
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> u(0.0, 10.0);
  Trajectory pos{0.0, 10.0, {}};
  for (int k = 0; k < 600; ++k) pos.samples.push_back(u(rng));
  const auto stored = store.store("Sample", MotionKind::free, 3, pos);
  const auto loaded = SignatureStore(dir / "sig").load("Sample", MotionKind::free, 3);
  if (!(loaded.position == pos) || !(loaded.velocity == stored.velocity)) problems.push_back("signature round trip");
  if (!fs::exists(dir / "sig" / "P1_03_Sample_free_1d.txt")) problems.push_back("signature file name");

  std::string detail = "names P1_03_Sample_free_1d.txt, P2_03_L_1d.txt, P5_02_4_1d.txt; 3/2/2 columns; store round trip";
  if (!problems.empty()) {
    detail = "problems:";
    for (const auto& p : problems) detail += " " + p + ";";
  }
  return {problems.empty(), detail};
}

Outcome dyad_analogue() {
  const auto d = analogues::dyad();
  return {!d.partial && d.rho_d >= 0.9 && d.eps <= 0.05,
          fmt("sinusoid leader + PD follower VP: rho_d %.4f (>= 0.9), eps %.4f (<= 0.05)", d.rho_d, d.eps)};
}

std::string rows_text(const std::vector<sim::SweepRow>& rows) {
  std::string s;
  for (const auto& r : rows) s += fmt("%s%s %.4f +- %.4f", s.empty() ? "" : ", ", r.name.c_str(), r.mean, r.std);
  return s;
}

std::size_t aborted(const std::vector<sim::SweepRow>& rows) {
  std::size_t n = 0;
  for (const auto& r : rows) n += r.aborted;
  return n;
}

Outcome topology_analogue() {
  const auto rows = sim::sweep(analogues::topology_cases(), analogues::kTopologyTrials, analogues::kTopologySeedBase,
                               sim::surrogate_factory());
  return {rows[0].mean > rows[1].mean,
          fmt("%zu trials each: ", analogues::kTopologyTrials) + rows_text(rows) + fmt("; aborted %zu", aborted(rows))};
}

Outcome vp_role_analogue() {
  const auto rows =
      sim::sweep(analogues::vp_role_cases(), analogues::kRoleTrials, analogues::kRoleSeedBase, sim::surrogate_factory());
  return {rows[0].mean >= rows[1].mean && rows[1].mean >= rows[2].mean,
          fmt("%zu trials each: ", analogues::kRoleTrials) + rows_text(rows) + fmt("; aborted %zu", aborted(rows))};
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"metrics formula suite", metrics_formulas},
      {"invariance suite", invariance},
      {"hilbert pipeline", hilbert_pipeline},
      {"dynamics suite", dynamics},
      {"routing soundness", routing},
      {"file-format goldens", file_goldens},
      {"dyadic HP-VP analogue", dyad_analogue},
      {"topology-effect analogue", topology_analogue},
      {"VP-role analogue", vp_role_analogue},
  };
  int failed = 0;
  for (const auto& [name, check] : criteria) {
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    std::printf("%s %s: %s\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str());
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed == 0 ? 0 : 1;
}
