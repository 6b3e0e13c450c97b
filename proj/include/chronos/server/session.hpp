#pragma once

#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "chronos/core/trial_record.hpp"
#include "chronos/dynamics/virtual_player.hpp"
#include "chronos/io/config_text.hpp"
#include "chronos/io/signature_store.hpp"
#include "chronos/io/trial_files.hpp"
#include "chronos/server/protocol.hpp"

namespace chronos {

inline constexpr double kServerTickHz = 50.0;
inline constexpr long long kServerTickMs = 20;
inline constexpr int kCountdownS = 3;

enum class Phase { lobby, countdown, running, finished };

inline std::string_view to_string(Phase p) {
  switch (p) {
    case Phase::lobby: return "lobby";
    case Phase::countdown: return "countdown";
    case Phase::running: return "running";
    case Phase::finished: return "finished";
  }
  return "?";
}

// Delivers one encoded line to the human at a 0-based index.
using Outbox = std::function<void(std::size_t index, const std::string& line)>;

// One trial, driven entirely by calls from its owner: join/position/quit
// events and tick(). No clocks or threads in here; the server runtime and the
// headless harness both feed it.
class Session {
 public:
  // signatures: motor signature for every VP that needs one, keyed by index.
  Session(TrialConfig config, const std::map<std::size_t, MotorSignature>& signatures, Outbox out)
      : config_(std::move(config)), out_(std::move(out)) {
    validate(config_);
    const std::size_t n = config_.n_players();
    claimed_.assign(n, false);
    x_.assign(n, kGameCenterDm);
    v_.assign(n, 0.0);
    for (const auto& [i, vp] : config_.vp_configs) {
      std::optional<MotorSignature> sig;
      if (auto it = signatures.find(i); it != signatures.end()) sig = it->second;
      vps_.emplace(i, VirtualPlayer(vp, sig));
      claimed_[i] = true;
      x_[i] = vps_.at(i).position();
    }
    for (std::size_t i = 0; i < n; ++i) neighbors_.push_back(config_.topology.neighbors_of(i));
    buffers_.assign(n, Trajectory{0.0, config_.record_rate_hz, {}});
    duration_ticks_ = static_cast<long long>(std::llround(config_.duration_s * kServerTickHz));
    if (duration_ticks_ < 1) throw ValidationError("trial shorter than one server tick");
    if (config_.n_humans() == 0) start();
  }

  const TrialConfig& config() const { return config_; }
  Phase phase() const { return phase_; }
  bool aborted() const { return aborted_; }
  long long clock_ms() const { return tick_ * kServerTickMs; }
  std::size_t joined_humans() const {
    std::size_t k = 0;
    for (std::size_t i = 0; i < claimed_.size(); ++i) k += claimed_[i] && !config_.is_virtual(i);
    return k;
  }

  // Claim a human slot. Starts the countdown once every human slot is taken.
  void join(std::size_t index) {
    if (phase_ != Phase::lobby) throw ValidationError("session has already started");
    if (index >= config_.n_players())
      throw ValidationError("index " + std::to_string(index + 1) + " outside 1.." +
                            std::to_string(config_.n_players()));
    if (config_.is_virtual(index)) throw ValidationError("index " + std::to_string(index + 1) + " is taken");
    if (joined_humans() == config_.n_humans()) throw ValidationError("session is full");
    if (claimed_[index]) throw ValidationError("index " + std::to_string(index + 1) + " is taken");
    claimed_[index] = true;
    send(index, wire::joined(static_cast<int>(index + 1), config_.role_of(index)));
    if (joined_humans() == config_.n_humans()) start();
  }

  // Latest value wins; ignored outside the running phase.
  bool position(std::size_t index, double x) {
    if (phase_ != Phase::running || index >= x_.size() || config_.is_virtual(index) || !std::isfinite(x))
      return false;
    x_[index] = std::clamp(x, 0.0, kGameAreaDm);
    return true;
  }

  // A human leaving: frees the slot in the lobby, aborts a started trial.
  void leave(std::size_t index) {
    if (index >= claimed_.size() || config_.is_virtual(index)) return;
    if (phase_ == Phase::lobby) {
      claimed_[index] = false;
      return;
    }
    if (phase_ == Phase::countdown || phase_ == Phase::running) abort();
  }
  void quit(std::size_t index) { leave(index); }

  void tick() {
    switch (phase_) {
      case Phase::lobby:
      case Phase::finished:
        return;
      case Phase::countdown:
        ++countdown_ticks_;
        if (countdown_ticks_ == kCountdownS * static_cast<long long>(kServerTickHz)) {
          phase_ = Phase::running;
        } else if (countdown_ticks_ % static_cast<long long>(kServerTickHz) == 0) {
          broadcast(wire::countdown(kCountdownS - static_cast<int>(countdown_ticks_ / static_cast<long long>(kServerTickHz))));
        }
        return;
      case Phase::running:
        run_tick();
        return;
    }
  }

  // Available once finished; partial if the trial was aborted.
  TrialRecord record() const {
    TrialRecord r;
    r.config = config_;
    r.partial = aborted_;
    for (std::size_t i = 0; i < buffers_.size(); ++i) {
      PlayerRecord p{i, config_.is_virtual(i), buffers_[i], std::nullopt};
      if (config_.trial_type == TrialType::solo && p.position.size() >= 4) p.velocity = signature_velocity(p.position);
      r.players.push_back(std::move(p));
    }
    return r;
  }

 private:
  void start() {
    phase_ = Phase::countdown;
    broadcast(wire::countdown(kCountdownS));
  }

  void run_tick() {
    const long long ms = clock_ms();
    const std::size_t n = x_.size();
    std::vector<double> pos(n), vel(n);
    for (std::size_t i = 0; i < n; ++i) {
      if (auto it = vps_.find(i); it != vps_.end()) {
        pos[i] = it->second.position();
        vel[i] = it->second.velocity();
      } else {
        pos[i] = x_[i];
        vel[i] = tick_ == 0 ? 0.0 : (x_[i] - prev_x_[i]) * kServerTickHz;
      }
    }
    prev_x_ = x_;

    // Sample-and-hold onto the nominal recording grid: every grid instant in
    // [ms, ms + tick) takes the state of this tick.
    const double grid_ms = 1000.0 / config_.record_rate_hz;
    while (true) {
      const double t = static_cast<double>(recorded_) * grid_ms;
      if (t >= static_cast<double>(ms + kServerTickMs) - 1e-9 || t >= config_.duration_s * 1000.0 - 1e-9) break;
      for (std::size_t i = 0; i < n; ++i) buffers_[i].samples.push_back(pos[i]);
      ++recorded_;
    }

    for (std::size_t i = 0; i < n; ++i) {
      if (config_.is_virtual(i)) continue;
      std::map<int, double> peers;
      for (std::size_t j : neighbors_[i]) peers[static_cast<int>(j + 1)] = pos[j];
      send(i, wire::frame(ms, pos[i], peers));
    }

    try {
      for (auto& [i, vp] : vps_) {
        std::vector<double> yp, yv;
        for (std::size_t j : neighbors_[i]) {
          yp.push_back(pos[j]);
          yv.push_back(vel[j]);
        }
        vp.advance(aggregate_neighbors(yp, yv), 1.0 / kServerTickHz);
      }
    } catch (const TrialAbort&) {
      abort();
      return;
    }

    ++tick_;
    if (tick_ >= duration_ticks_) finish(true);
  }

  void abort() {
    aborted_ = true;
    finish(false);
  }

  void finish(bool complete) {
    phase_ = Phase::finished;
    broadcast(wire::end(complete));
  }

  void broadcast(const std::string& line) {
    for (std::size_t i = 0; i < claimed_.size(); ++i)
      if (claimed_[i] && !config_.is_virtual(i)) send(i, line);
  }

  void send(std::size_t index, const std::string& line) {
    if (out_) out_(index, line);
  }

  TrialConfig config_;
  Outbox out_;
  Phase phase_ = Phase::lobby;
  std::vector<bool> claimed_;
  std::vector<double> x_, prev_x_, v_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::map<std::size_t, VirtualPlayer> vps_;
  std::vector<Trajectory> buffers_;
  long long tick_ = 0, countdown_ticks_ = 0, duration_ticks_ = 0;
  std::size_t recorded_ = 0;
  bool aborted_ = false;
};

// Companion file holding the full configuration of a persisted trial.
inline std::string trial_sidecar_name(const TrialConfig& cfg) {
  std::string name = trial_file_name(cfg, 0);
  return name.substr(0, name.size() - std::string("_1d.txt").size()) + "_trial.txt";
}

// Motor signatures the VPs of a configuration need, from the store.
inline std::map<std::size_t, MotorSignature> resolve_signatures(const TrialConfig& cfg, const SignatureStore& store) {
  std::map<std::size_t, MotorSignature> out;
  for (const auto& [i, vp] : cfg.vp_configs)
    if (vp.signature) out.emplace(i, store.load(vp.signature->owner, vp.signature->kind));
  return out;
}

// Write player files plus the configuration sidecar; store the signature of a
// completed solo trial. Returns the player files.
inline std::vector<fs::path> persist_trial(const TrialRecord& rec, const fs::path& dir, SignatureStore* store) {
  std::vector<fs::path> files;
  if (rec.players.empty() || rec.players.front().position.empty()) return files;
  TrialRecord out = rec;
  for (auto& p : out.players)
    if (p.velocity && p.velocity->size() != p.position.size()) p.velocity.reset();
  files = write_trial(dir, out);
  {
    std::ofstream side(dir / trial_sidecar_name(rec.config));
    if (!side) throw IoError("cannot write trial sidecar in " + dir.string());
    side << "partial=" << (rec.partial ? "true" : "false") << '\n' << serialize_trial_config(rec.config);
  }
  if (store && rec.config.trial_type == TrialType::solo && !rec.partial)
    store->store(rec.config.solo_owner, rec.config.solo_kind, rec.config.trial_number, rec.players.front().position);
  return files;
}

}  // namespace chronos
