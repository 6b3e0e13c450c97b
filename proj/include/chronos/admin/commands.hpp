#pragma once

#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "chronos/io/config_text.hpp"
#include "chronos/io/trial_files.hpp"
#include "chronos/metrics/analysis.hpp"
#include "chronos/net/socket.hpp"
#include "chronos/server/protocol.hpp"
#include "chronos/server/session.hpp"

namespace chronos::admin {

// Exit codes shared by every subcommand.
inline constexpr int kExitOk = 0;
inline constexpr int kExitFailure = 1;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitUnreachable = 3;

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

// Config text for a configuration built from flags. The text is what the
// server receives, so everything is validated locally first.
struct Built {
  std::string text;
  ParsedConfig parsed;
};

// --set lines go after the generated keys; the topology block comes last.
inline Built finish(std::ostringstream& text, const std::vector<std::string>& sets, const std::string& matrix) {
  for (const auto& s : sets) {
    if (s.find('=') == std::string::npos) throw ValidationError("--set expects key=value, got '" + s + "'");
    text << s << '\n';
  }
  text << "topology:\n" << matrix;
  Built b;
  b.text = text.str();
  b.parsed = parse_trial_config(b.text, true);
  for (const auto& [k, v] : b.parsed.extra)
    if (k != "session") throw ValidationError("unknown configuration key '" + k + "'");
  return b;
}

// Standalone VP text ("mode=leader\nkp=3\n...") rewritten under vp.N.
inline std::string prefix_vp_text(const std::string& vp_text, std::size_t number) {
  std::istringstream in(vp_text);
  std::ostringstream out;
  std::string line;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    out << "vp." << number << '.' << t << '\n';
  }
  return out.str();
}

struct SoloArgs {
  std::string player;
  std::string kind;
  double duration_s = 60.0;
  std::optional<int> trial;
  std::vector<std::string> sets;
};

inline Built build_solo(const SoloArgs& a) {
  validate_owner(a.player);
  std::ostringstream t;
  t << "trial_type=solo\n"
    << "duration_s=" << format_double(a.duration_s) << '\n'
    << "solo_owner=" << a.player << '\n'
    << "solo_kind=" << to_string(parse_motion_kind(a.kind)) << '\n';
  if (a.trial) t << "trial_number=" << *a.trial << '\n';
  return finish(t, a.sets, "0\n");
}

struct DyadArgs {
  std::string kind = "hp_hp";            // hp_hp | hp_vp
  std::vector<std::string> roles;        // per player: leader|follower|joint
  double duration_s = 30.0;
  std::size_t vp_number = 2;             // 1-based, hp_vp only
  std::optional<std::string> vp_text;    // standalone VP configuration
  std::optional<std::string> model, controller, signature;
  std::optional<int> trial;
  std::vector<std::string> sets;
};

inline Built build_dyad(const DyadArgs& a) {
  const bool vp = a.kind == "hp_vp";
  if (!vp && a.kind != "hp_hp") throw ValidationError("dyad kind must be hp_hp or hp_vp, got '" + a.kind + "'");
  std::vector<Role> roles;
  for (const auto& r : a.roles) roles.push_back(parse_role(r));
  if (roles.size() == 1 && roles[0] == Role::joint_improviser) roles.push_back(Role::joint_improviser);
  if (roles.size() != 2) throw ValidationError("give roles for both players, e.g. --roles leader,follower");

  std::ostringstream t;
  t << "trial_type=" << (vp ? "dyadic_hp_vp" : "dyadic_hp_hp") << '\n'
    << "duration_s=" << format_double(a.duration_s) << '\n';
  if (a.trial) t << "trial_number=" << *a.trial << '\n';
  for (std::size_t i = 0; i < 2; ++i) t << "role." << i + 1 << '=' << to_string(roles[i]) << '\n';
  if (vp) {
    if (a.vp_number != 1 && a.vp_number != 2) throw ValidationError("the VP must be player 1 or 2");
    const std::string p = "vp." + std::to_string(a.vp_number) + ".";
    std::string body = a.vp_text ? prefix_vp_text(*a.vp_text, a.vp_number) : "";
    auto has = [&](const std::string& key) { return body.find(p + key + "=") != std::string::npos; };
    if (!has("mode")) {
      const Role r = roles[a.vp_number - 1];
      if (r == Role::joint_improviser) throw ValidationError("a virtual player cannot be a joint improviser");
      body += p + "mode=" + (r == Role::leader ? "leader" : "follower") + "\n";
    }
    if (a.model) body += p + "model=" + *a.model + "\n";
    if (a.controller) body += p + "controller=" + *a.controller + "\n";
    if (a.signature) body += p + "signature=" + *a.signature + "\n";
    t << body;
  } else if (a.vp_text || a.model || a.controller || a.signature) {
    throw ValidationError("VP options need --kind hp_vp");
  }
  return finish(t, a.sets, "0 1\n1 0\n");
}

struct GroupArgs {
  std::string topology_text;
  double duration_s = 30.0;
  std::vector<std::pair<std::size_t, std::string>> vps;  // 1-based number, VP text
  std::optional<int> trial;
  std::vector<std::string> sets;
};

inline Built build_group(const GroupArgs& a) {
  std::ostringstream t;
  t << "trial_type=group\n"
    << "duration_s=" << format_double(a.duration_s) << '\n';
  if (a.trial) t << "trial_number=" << *a.trial << '\n';
  for (const auto& [n, text] : a.vps) t << prefix_vp_text(text, n);
  return finish(t, a.sets, a.topology_text);
}

// Request/response client for the administration messages.
class Client {
 public:
  Client(const std::string& host, int port) : conn_(net::connect_tcp(host, port)) {}

  wire::ServerMessage request(const std::string& line) {
    if (!conn_.send(line)) throw net::UnreachableError("lost connection to the server");
    const auto reply = conn_.read_message();
    if (!reply) throw net::UnreachableError("server closed the connection");
    auto msg = wire::parse_server(*reply);
    if (msg.t == "error") throw ValidationError(msg.body.value("msg", std::string("server error")));
    return msg;
  }

 private:
  net::LineConnection conn_;
};

// Analysis of persisted trial files. The trial's configuration sidecar, when
// present next to the files, supplies topology and roles.
inline TrialRecord load_trial_for_analysis(const std::vector<fs::path>& files, const std::optional<Topology>& topology) {
  std::optional<Topology> topo = topology;
  if (!topo && !files.empty()) {
    for (const auto& f : files) {
      const auto p = parse_trial_file_name(f.filename().string());
      if (!p) continue;
      const auto side = f.parent_path() / ("P" + std::to_string(p->n_players) + "_0" +
                                           std::to_string(p->trial_number) + "_" + p->label + "_trial.txt");
      if (!fs::exists(side)) continue;
      const auto parsed = parse_trial_config(read_text_file(side.string()), true);
      topo = parsed.config.topology;
      break;
    }
  }
  return load_trial(files, topo);
}

}  // namespace chronos::admin
