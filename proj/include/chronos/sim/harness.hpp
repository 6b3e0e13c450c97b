#pragma once

#include <cmath>
#include <future>
#include <iomanip>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <variant>
#include <vector>

#include "chronos/dynamics/integrator.hpp"
#include "chronos/metrics/analysis.hpp"
#include "chronos/server/session.hpp"

namespace chronos::sim {

inline constexpr double kDefaultSurrogateNoiseDm = 0.05;
inline constexpr double kDefaultSurrogateCoupling = 1.0;

struct Sinusoid {
  double amplitude_dm = 2.0;
  double freq_hz = 0.25;
  double phase_rad = 0.0;
};

struct SignatureSource {
  MotorSignature signature;
};

// HKB node pulled toward the mean of the peers in its frames:
// u = K (ybar - x) + K/2 (ybar' - x').
struct CoupledHkb {
  DynamicsParams dynamics;
  double coupling = kDefaultSurrogateCoupling;
  double x0 = 1.0, v0 = 0.0;  // centred coordinates
};

struct ScriptedPlayer {
  std::variant<Sinusoid, SignatureSource, CoupledHkb> source;
  double noise_std_dm = 0.0;
  std::uint64_t seed = 0;
};

inline void validate(const ScriptedPlayer& p) {
  if (!(p.noise_std_dm >= 0.0) || !std::isfinite(p.noise_std_dm)) throw ValidationError("noise std must be >= 0");
  if (const auto* s = std::get_if<Sinusoid>(&p.source)) {
    if (!(std::abs(s->amplitude_dm) <= kGameCenterDm)) throw ValidationError("sinusoid amplitude exceeds the game area");
    if (!(s->freq_hz > 0.0) || !std::isfinite(s->phase_rad)) throw ValidationError("sinusoid needs a positive frequency");
  } else if (const auto* c = std::get_if<CoupledHkb>(&p.source)) {
    validate(c->dynamics);
    if (!(c->coupling >= 0.0) || !std::isfinite(c->coupling)) throw ValidationError("coupling gain must be >= 0");
    if (!std::isfinite(c->x0) || !std::isfinite(c->v0)) throw ValidationError("initial state must be finite");
  } else {
    validate_signature(std::get<SignatureSource>(p.source).signature);
  }
}

// Per-run state of one scripted human.
class ScriptedRunner {
 public:
  ScriptedRunner(const ScriptedPlayer& p, std::uint64_t run_seed, std::size_t index) : spec_(p) {
    validate(p);
    std::seed_seq seq{run_seed, p.seed, static_cast<std::uint64_t>(index)};
    rng_.seed(seq);
    if (const auto* c = std::get_if<CoupledHkb>(&p.source)) {
      x_ = c->x0;
      v_ = c->v0;
    } else if (const auto* s = std::get_if<SignatureSource>(&p.source)) {
      playback_.emplace(s->signature, 0.0);
    }
  }

  // Position to report at session time ms (absolute dm).
  double position(long long ms) {
    double x = 0.0;
    if (const auto* s = std::get_if<Sinusoid>(&spec_.source)) {
      const double t = static_cast<double>(ms) / 1000.0;
      x = kGameCenterDm + s->amplitude_dm * std::sin(2.0 * std::numbers::pi * s->freq_hz * t + s->phase_rad);
    } else if (playback_) {
      x = playback_->position(static_cast<std::size_t>(ms / 10));
    } else {
      x = kGameCenterDm + x_;
    }
    if (spec_.noise_std_dm > 0.0) x += std::normal_distribution<double>(0.0, spec_.noise_std_dm)(rng_);
    return std::clamp(x, 0.0, kGameAreaDm);
  }

  void on_frame(const wire::Frame& f) {
    if (f.peers.empty()) return;
    double mean = 0.0;
    for (const auto& [j, x] : f.peers) mean += x;
    mean /= static_cast<double>(f.peers.size());
    const double centred = mean - kGameCenterDm;
    ybar_dot_ = have_frame_ ? (centred - ybar_) * kServerTickHz : 0.0;
    ybar_ = centred;
    have_frame_ = true;
  }

  // Integrate the surrogate across one server tick (two 10 ms steps).
  void advance() {
    const auto* c = std::get_if<CoupledHkb>(&spec_.source);
    if (!c) return;
    const double k = have_frame_ ? c->coupling : 0.0;
    auto rhs = [&](const std::array<double, 2>& y) -> std::array<double, 2> {
      const double u = k * (ybar_ - y[0]) + 0.5 * k * (ybar_dot_ - y[1]);
      return {y[1], inner_dynamics(y[0], y[1], c->dynamics) + u};
    };
    const double h = 1.0 / kVpTickHz;
    const int steps = static_cast<int>(std::lround(kVpTickHz / kServerTickHz));
    std::array<double, 2> y{x_, v_};
    for (int s = 0; s < steps; ++s) y = rk4_step<2>(y, h, rhs);
    x_ = y[0];
    v_ = y[1];
  }

 private:
  ScriptedPlayer spec_;
  std::mt19937_64 rng_;
  std::optional<SignaturePlayback> playback_;
  double x_ = 0.0, v_ = 0.0, ybar_ = 0.0, ybar_dot_ = 0.0;
  bool have_frame_ = false;
};

struct RunOptions {
  std::map<std::size_t, MotorSignature> signatures;  // for VPs, by index
  std::optional<fs::path> out_dir;                   // persist trial files here
  bool capture = false;                              // keep every line sent to each player
  bool analyze = true;                               // group/dyad report (needs >= 64 samples at 100 Hz)
};

struct RunResult {
  TrialRecord record;
  std::optional<TrialReport> report;  // absent for solo trials
  std::vector<fs::path> files;
  std::map<std::size_t, std::vector<std::string>> sent;  // when captured
};

// Drive a Session in lockstep: scripted positions in, tick, frames out to the
// surrogates. No clocks or sockets; identical inputs give identical output.
inline RunResult run_headless(const TrialConfig& config, const std::map<std::size_t, ScriptedPlayer>& scripted,
                              std::uint64_t seed, const RunOptions& opt = {}) {
  validate(config);
  std::map<std::size_t, ScriptedRunner> runners;
  for (std::size_t i = 0; i < config.n_players(); ++i) {
    if (config.is_virtual(i)) continue;
    auto it = scripted.find(i);
    if (it == scripted.end()) throw ValidationError("no scripted player for human " + std::to_string(i + 1));
    runners.emplace(i, ScriptedRunner(it->second, seed, i));
  }
  for (const auto& [i, p] : scripted)
    if (!runners.count(i)) throw ValidationError("scripted player " + std::to_string(i + 1) + " is not a human slot");

  RunResult result;
  Session session(config, opt.signatures, [&](std::size_t i, const std::string& line) {
    if (opt.capture) result.sent[i].push_back(line);
    auto it = runners.find(i);
    if (it == runners.end() || line.rfind("{\"t\":\"frame\"", 0) != 0) return;
    it->second.on_frame(wire::decode_frame(wire::parse_server(line).body));
  });
  for (auto& [i, r] : runners) session.join(i);
  while (session.phase() == Phase::countdown) session.tick();
  while (session.phase() == Phase::running) {
    const long long ms = session.clock_ms();
    for (auto& [i, r] : runners) session.position(i, r.position(ms));
    session.tick();
    for (auto& [i, r] : runners) r.advance();
  }

  result.record = session.record();
  if (opt.analyze && config.trial_type != TrialType::solo) result.report = analyze_trial(result.record);
  if (opt.out_dir) result.files = persist_trial(result.record, *opt.out_dir, nullptr);
  return result;
}

// Coupled-HKB surrogates with natural frequencies drawn uniformly from
// [f_lo, f_hi] Hz and random initial phase on the limit cycle.
inline std::map<std::size_t, ScriptedPlayer> make_surrogates(const std::vector<std::size_t>& indices, std::uint64_t seed,
                                                             double f_lo = 0.2, double f_hi = 0.3,
                                                             double coupling = kDefaultSurrogateCoupling,
                                                             double noise_dm = kDefaultSurrogateNoiseDm) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> freq(f_lo, f_hi), phase(-std::numbers::pi, std::numbers::pi);
  std::map<std::size_t, ScriptedPlayer> out;
  for (std::size_t i : indices) {
    CoupledHkb c;
    c.dynamics.omega = 2.0 * std::numbers::pi * freq(rng);
    c.coupling = coupling;
    const double amp = 2.0 / std::sqrt(c.dynamics.alpha + c.dynamics.beta * c.dynamics.omega * c.dynamics.omega);
    const double ph = phase(rng);
    c.x0 = amp * std::cos(ph);
    c.v0 = -amp * c.dynamics.omega * std::sin(ph);
    out[i] = ScriptedPlayer{c, noise_dm, seed ^ (0x9e3779b97f4a7c15ULL * (i + 1))};
  }
  return out;
}

// Motor signature of a clean sinusoid, as a solo recording at rate_hz.
inline MotorSignature sinusoid_signature(const std::string& owner, double freq_hz, double amplitude_dm,
                                         double duration_s, double rate_hz = 10.0) {
  Trajectory pos{0.0, rate_hz, {}};
  const auto n = static_cast<std::size_t>(std::llround(duration_s * rate_hz));
  for (std::size_t k = 0; k < n; ++k)
    pos.samples.push_back(kGameCenterDm + amplitude_dm * std::sin(2.0 * std::numbers::pi * freq_hz *
                                                                  static_cast<double>(k) / rate_hz));
  MotorSignature sig{owner, MotionKind::sinusoidal, 1, pos, signature_velocity(pos)};
  validate_signature(sig);
  return sig;
}

inline double group_index_of(const RunResult& r) {
  if (const auto* g = std::get_if<GroupReport>(&*r.report)) return g->rho_g_mean;
  throw ValidationError("not a group trial");
}

struct SweepCase {
  std::string name;
  TrialConfig config;
  std::map<std::size_t, MotorSignature> signatures;
};

struct SweepRow {
  std::string name;
  std::vector<double> rho_g;  // one per trial
  double mean = 0.0, std = 0.0;
  std::size_t aborted = 0;  // trials cut short by a VP abort (still averaged)
};

// Scripted players for trial t of a case; seeds must be derived from t.
using ScriptFactory = std::function<std::map<std::size_t, ScriptedPlayer>(const SweepCase&, std::size_t trial,
                                                                         std::uint64_t seed)>;

inline ScriptFactory surrogate_factory(double coupling = kDefaultSurrogateCoupling,
                                       double noise_dm = kDefaultSurrogateNoiseDm) {
  return [=](const SweepCase& c, std::size_t, std::uint64_t seed) {
    std::vector<std::size_t> humans;
    for (std::size_t i = 0; i < c.config.n_players(); ++i)
      if (!c.config.is_virtual(i)) humans.push_back(i);
    return make_surrogates(humans, seed, 0.2, 0.3, coupling, noise_dm);
  };
}

// Trial t of every case uses seed_base + t, so cases see the same surrogates.
// Trials run in parallel; results do not depend on scheduling.
inline std::vector<SweepRow> sweep(const std::vector<SweepCase>& cases, std::size_t trials, std::uint64_t seed_base,
                                   const ScriptFactory& factory = surrogate_factory()) {
  if (trials == 0) throw ValidationError("a sweep needs at least one trial per topology");
  std::vector<SweepRow> rows;
  for (const auto& c : cases) {
    if (c.config.trial_type != TrialType::group) throw ValidationError("sweep case '" + c.name + "' is not a group trial");
    std::vector<std::future<std::pair<double, bool>>> runs;
    for (std::size_t t = 0; t < trials; ++t)
      runs.push_back(std::async(std::launch::async, [&c, &factory, t, seed_base] {
        const std::uint64_t seed = seed_base + t;
        RunOptions o;
        o.signatures = c.signatures;
        const RunResult r = run_headless(c.config, factory(c, t, seed), seed, o);
        return std::pair{group_index_of(r), r.record.partial};
      }));
    SweepRow row{c.name, {}, 0.0, 0.0, 0};
    for (auto& f : runs) {
      const auto [rho, partial] = f.get();
      row.rho_g.push_back(rho);
      row.aborted += partial;
    }
    for (double v : row.rho_g) row.mean += v;
    row.mean /= static_cast<double>(trials);
    if (trials > 1) {
      double ss = 0.0;
      for (double v : row.rho_g) ss += (v - row.mean) * (v - row.mean);
      row.std = std::sqrt(ss / static_cast<double>(trials - 1));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline void write_sweep_table(std::ostream& out, const std::vector<SweepRow>& rows) {
  std::size_t w = 8;
  for (const auto& r : rows) w = std::max(w, r.name.size());
  const auto flags = out.flags();
  out << std::left << std::setw(static_cast<int>(w)) << "topology" << "  rho_g (mean ± std)  trials  aborted\n";
  for (const auto& r : rows)
    out << std::left << std::setw(static_cast<int>(w)) << r.name << "  " << std::fixed << std::setprecision(4) << r.mean
        << " ± " << r.std << "  " << std::setw(6) << std::right << r.rho_g.size() << "  " << std::setw(7)
        << r.aborted << '\n';
  out.flags(flags);
}

}  // namespace chronos::sim
