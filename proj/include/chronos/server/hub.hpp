#pragma once

#include <chrono>
#include <condition_variable>
#include <deque>
#include <future>
#include <memory>
#include <mutex>
#include <set>
#include <thread>
#include <tuple>
#include <variant>

#include "chronos/server/session.hpp"

namespace chronos {

// A bidirectional message stream to one client. Implementations frame
// messages (newline for raw TCP, text frames for WebSocket); payloads are the
// same JSON text either way.
class Connection {
 public:
  virtual ~Connection() = default;
  virtual std::optional<std::string> read_message() = 0;  // nullopt on EOF
  virtual bool send(const std::string& payload) = 0;
  virtual void close() = 0;
};

struct SessionResult {
  bool partial = false;
  std::vector<std::string> files;
  std::string error;  // persistence failure, if any
};

// Owns one Session and the only thread that touches it. Input events are
// queued in arrival order and applied just before the next tick.
class SessionHost {
 public:
  struct JoinEvent {
    std::size_t index;
    std::shared_ptr<Connection> conn;
    std::shared_ptr<std::promise<std::string>> reply;  // empty string on success
  };
  struct PosEvent {
    std::size_t index;
    double x;
  };
  struct LeaveEvent {
    std::size_t index;
  };
  using Event = std::variant<JoinEvent, PosEvent, LeaveEvent>;

  SessionHost(std::string id, TrialConfig config, const std::map<std::size_t, MotorSignature>& signatures,
              fs::path trial_dir, SignatureStore* store, double speed)
      : id_(std::move(id)),
        session_(std::move(config), signatures, [this](std::size_t i, const std::string& line) { deliver(i, line); }),
        trial_dir_(std::move(trial_dir)),
        store_(store),
        tick_period_(std::chrono::duration_cast<std::chrono::steady_clock::duration>(
            std::chrono::duration<double, std::milli>(static_cast<double>(kServerTickMs) / speed))) {}

  ~SessionHost() {
    {
      std::lock_guard lock(mu_);
      stop_ = true;
    }
    cv_.notify_all();
    if (thread_.joinable()) thread_.join();
  }

  void run() { thread_ = std::thread([this] { loop(); }); }

  const std::string& id() const { return id_; }
  const TrialConfig& config() const { return session_.config(); }

  void post(Event e) {
    {
      std::lock_guard lock(mu_);
      if (result_) {
        if (auto* j = std::get_if<JoinEvent>(&e)) j->reply->set_value("session has already finished");
        return;
      }
      events_.push_back(std::move(e));
    }
    cv_.notify_all();
  }

  // Blocks until the trial is over and persisted.
  SessionResult wait() {
    std::unique_lock lock(mu_);
    done_cv_.wait(lock, [&] { return result_.has_value(); });
    return *result_;
  }

  std::optional<SessionResult> result() const {
    std::lock_guard lock(mu_);
    return result_;
  }

 private:
  void deliver(std::size_t index, const std::string& line) {
    auto it = conns_.find(index);
    if (it != conns_.end()) it->second->send(line);
  }

  void apply(Event& e) {
    if (auto* j = std::get_if<JoinEvent>(&e)) {
      const bool fresh = conns_.emplace(j->index, j->conn).second;
      try {
        if (!fresh) throw ValidationError("index " + std::to_string(j->index + 1) + " is taken");
        session_.join(j->index);
        j->reply->set_value("");
      } catch (const ValidationError& err) {
        if (fresh) conns_.erase(j->index);
        j->reply->set_value(err.what());
      }
    } else if (auto* p = std::get_if<PosEvent>(&e)) {
      session_.position(p->index, p->x);
    } else if (auto* l = std::get_if<LeaveEvent>(&e)) {
      session_.leave(l->index);  // the leaver still gets "end" if this aborts the trial
      conns_.erase(l->index);
    }
  }

  void loop() {
    using clock = std::chrono::steady_clock;
    auto next = clock::now();
    bool ticking = false;
    std::unique_lock lock(mu_);
    while (!stop_ && session_.phase() != Phase::finished) {
      if (!ticking && session_.phase() != Phase::lobby) {
        ticking = true;
        next = clock::now() + tick_period_;
      }
      if (ticking) cv_.wait_until(lock, next, [&] { return stop_ || clock::now() >= next; });
      else cv_.wait(lock, [&] { return stop_ || !events_.empty(); });
      if (stop_) break;

      std::deque<Event> batch;
      batch.swap(events_);
      lock.unlock();
      for (auto& e : batch) apply(e);
      if (ticking && clock::now() >= next) {
        session_.tick();
        next += tick_period_;
      }
      lock.lock();
    }
    lock.unlock();

    // Trial over: answer stragglers, then persist outside the tick loop.
    SessionResult r;
    r.partial = session_.aborted() || session_.phase() != Phase::finished;
    try {
      for (const auto& f : persist_trial(session_.record(), trial_dir_, store_)) r.files.push_back(f.string());
    } catch (const std::exception& e) {
      r.error = e.what();
    }
    lock.lock();
    for (auto& e : events_)
      if (auto* j = std::get_if<JoinEvent>(&e)) j->reply->set_value("session has already finished");
    events_.clear();
    result_ = r;
    done_cv_.notify_all();
  }

  std::string id_;
  Session session_;
  fs::path trial_dir_;
  SignatureStore* store_;
  std::chrono::steady_clock::duration tick_period_;
  std::map<std::size_t, std::shared_ptr<Connection>> conns_;  // loop thread only

  mutable std::mutex mu_;
  std::condition_variable cv_, done_cv_;
  std::deque<Event> events_;
  std::optional<SessionResult> result_;
  bool stop_ = false;
  std::thread thread_;
};

struct HubOptions {
  fs::path data_root = "chronos-data";
  double speed = 1.0;  // >1 runs trials faster than real time (tests)
};

// Session registry plus the per-connection protocol handler.
class Hub {
 public:
  explicit Hub(HubOptions opt)
      : opt_(std::move(opt)), store_(opt_.data_root / "signatures"), trial_dir_(opt_.data_root / "trials") {
    if (!(opt_.speed > 0.0)) throw ValidationError("speed factor must be positive");
    fs::create_directories(trial_dir_);
  }

  SignatureStore& signatures() { return store_; }
  const fs::path& trial_dir() const { return trial_dir_; }

  // Create a session from configuration text. Unset parameters are reported
  // in defaults; trial numbers continue from what is already on disk unless
  // trial_number is given.
  std::string create(const std::string& text, std::vector<std::string>* defaults = nullptr) {
    ParsedConfig parsed = parse_trial_config(text, true);
    std::optional<std::string> name;
    for (const auto& [k, v] : parsed.extra) {
      if (k != "session") throw ValidationError("unknown configuration key '" + k + "'");
      name = v;
    }
    TrialConfig& cfg = parsed.config;
    KeyValues kv;
    std::string matrix;
    detail::split_config_text(text, kv, matrix);
    const bool explicit_number = kv.count("trial_number") != 0;

    std::lock_guard lock(mu_);
    const std::string label = player_label(cfg, 0);
    const auto key = [&](int t) { return std::tuple{cfg.n_players(), label, t}; };
    if (!explicit_number) {
      int t = next_trial_number(trial_dir_, cfg.n_players(), label);
      if (cfg.trial_type == TrialType::solo) t = std::max(t, store_.next_trial(cfg.solo_owner, cfg.solo_kind));
      while (reserved_.count(key(t))) ++t;
      cfg.trial_number = t;
    } else if (reserved_.count(key(cfg.trial_number)) || fs::exists(trial_dir_ / trial_file_name(cfg, 0))) {
      throw ValidationError("trial " + std::to_string(cfg.trial_number) + " already exists");
    }
    if (cfg.trial_type == TrialType::solo) {
      validate_owner(cfg.solo_owner);
      for (const auto& e : store_.list())
        if (e.owner == cfg.solo_owner && e.kind == cfg.solo_kind && e.trial == cfg.trial_number)
          throw ValidationError("signature " + cfg.solo_owner + "/" + std::string(to_string(cfg.solo_kind)) +
                                " trial " + std::to_string(cfg.trial_number) + " already stored");
    }

    const auto sigs = resolve_signatures(cfg, store_);
    const std::string id = name ? *name : std::to_string(++counter_);
    if (id.empty() || sessions_.count(id)) throw ValidationError("session '" + id + "' already exists");
    auto host = std::make_shared<SessionHost>(id, cfg, sigs, trial_dir_, &store_, opt_.speed);
    reserved_.insert(key(cfg.trial_number));
    sessions_[id] = host;
    host->run();
    if (defaults) *defaults = parsed.defaults_applied;
    return id;
  }

  std::shared_ptr<SessionHost> find(const std::string& id) const {
    std::lock_guard lock(mu_);
    auto it = sessions_.find(id);
    if (it == sessions_.end()) throw NotFoundError("no session '" + id + "'");
    return it->second;
  }

  // Protocol loop for one client; returns when the client goes away.
  void serve(const std::shared_ptr<Connection>& conn) {
    std::shared_ptr<SessionHost> host;
    std::size_t index = 0;
    while (auto line = conn->read_message()) {
      if (trim(*line).empty()) continue;
      try {
        const auto msg = wire::parse_client(*line);
        if (const auto* p = std::get_if<wire::Pos>(&msg)) {
          if (host) host->post(SessionHost::PosEvent{index, p->x});
        } else if (const auto* j = std::get_if<wire::Join>(&msg)) {
          if (host) throw ValidationError("already joined");
          auto h = find(j->session);
          if (j->index < 1) throw ValidationError("index must be at least 1");
          auto reply = std::make_shared<std::promise<std::string>>();
          auto answer = reply->get_future();
          h->post(SessionHost::JoinEvent{static_cast<std::size_t>(j->index - 1), conn, reply});
          const std::string err = answer.get();
          if (!err.empty()) throw ValidationError(err);
          host = h;
          index = static_cast<std::size_t>(j->index - 1);
        } else if (std::holds_alternative<wire::Quit>(msg)) {
          if (host) host->post(SessionHost::LeaveEvent{index});
          host.reset();
        } else if (const auto* c = std::get_if<wire::Create>(&msg)) {
          std::vector<std::string> defaults;
          const std::string id = create(c->config, &defaults);
          conn->send(wire::created(id, defaults));
        } else if (const auto* w = std::get_if<wire::Wait>(&msg)) {
          const SessionResult r = find(w->session)->wait();
          if (!r.error.empty()) throw IoError(r.error);
          conn->send(wire::finished(w->session, r.partial, r.files));
        } else if (std::holds_alternative<wire::ListSignatures>(msg)) {
          wire::ordered entries = wire::ordered::array();
          for (const auto& e : store_.list())
            entries.push_back({{"owner", e.owner}, {"kind", std::string(to_string(e.kind))}, {"trial", e.trial}, {"file", e.file}});
          conn->send(wire::detail::dump(wire::ordered{{"t", "signatures"}, {"entries", entries}}));
        } else if (const auto* g = std::get_if<wire::GetSignature>(&msg)) {
          const auto sig = store_.load(g->owner, g->kind, g->trial);
          std::vector<double> ms;
          for (std::size_t k = 0; k < sig.position.size(); ++k) ms.push_back(sig.position.time_at(k));
          conn->send(wire::detail::dump(wire::ordered{{"t", "signature"},
                                                      {"owner", sig.owner},
                                                      {"kind", std::string(to_string(sig.kind))},
                                                      {"trial", sig.trial},
                                                      {"ms", ms},
                                                      {"x", sig.position.samples},
                                                      {"v", sig.velocity.samples}}));
        }
      } catch (const std::exception& e) {
        conn->send(wire::error(e.what()));
      }
    }
    if (host) host->post(SessionHost::LeaveEvent{index});
  }

 private:
  HubOptions opt_;
  SignatureStore store_;
  fs::path trial_dir_;
  mutable std::mutex mu_;
  std::map<std::string, std::shared_ptr<SessionHost>> sessions_;
  std::set<std::tuple<std::size_t, std::string, int>> reserved_;
  int counter_ = 0;
};

}  // namespace chronos
