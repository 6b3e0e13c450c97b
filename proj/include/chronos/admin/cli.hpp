#pragma once

#include <CLI11.hpp>

#include <iostream>
#include <istream>
#include <ostream>

#include "chronos/admin/commands.hpp"

namespace chronos::admin {

struct ServerAddress {
  std::string host = "127.0.0.1";
  int port = 7878;
};

inline ServerAddress parse_server_address(const std::string& s) {
  const auto colon = s.rfind(':');
  if (colon == std::string::npos || colon == 0) throw ValidationError("--server expects host:port, got '" + s + "'");
  const long port = parse_int(std::string_view(s).substr(colon + 1), "port");
  if (port < 1 || port > 65535) throw ValidationError("port out of range: " + std::to_string(port));
  return {s.substr(0, colon), static_cast<int>(port)};
}

// Options every launching subcommand shares.
struct LaunchOptions {
  bool print_config = false;
  bool wait = false;
};

// Send a built configuration to the server (or just print it).
inline int launch(const Built& b, const LaunchOptions& lo, const ServerAddress& addr, std::ostream& out) {
  if (lo.print_config) {
    out << b.text;
    for (const auto& d : b.parsed.defaults_applied) out << "default: " << d << '\n';
    return kExitOk;
  }
  Client client(addr.host, addr.port);
  const auto created = client.request(wire::encode(wire::Create{b.text}));
  const std::string id = created.body.at("session").get<std::string>();
  for (const auto& d : created.body.at("defaults")) out << "default: " << d.get<std::string>() << '\n';
  const auto& cfg = b.parsed.config;
  out << "session " << id << " created: " << to_string(cfg.trial_type) << ", " << cfg.n_humans()
      << " human player(s) join with index";
  for (std::size_t i = 0; i < cfg.n_players(); ++i)
    if (!cfg.is_virtual(i)) out << ' ' << i + 1;
  out << '\n';
  if (!lo.wait) return kExitOk;
  const auto fin = client.request(wire::encode(wire::Wait{id}));
  const bool partial = fin.body.at("partial").get<bool>();
  out << "trial " << (partial ? "aborted (partial record)" : "complete") << '\n';
  for (const auto& f : fin.body.at("files")) out << "  " << f.get<std::string>() << '\n';
  return kExitOk;
}

inline std::vector<std::pair<std::size_t, std::string>> read_vp_specs(const std::vector<std::string>& specs) {
  std::vector<std::pair<std::size_t, std::string>> out;
  for (const auto& s : specs) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ValidationError("--vp expects N=FILE, got '" + s + "'");
    const long n = parse_int(std::string_view(s).substr(0, eq), "VP index");
    if (n < 1) throw ValidationError("VP index must be at least 1");
    out.emplace_back(static_cast<std::size_t>(n), read_text_file(s.substr(eq + 1)));
  }
  return out;
}

namespace detail {

inline std::string ask(std::istream& in, std::ostream& out, const std::string& question, const std::string& def) {
  out << question;
  if (!def.empty()) out << " [" << def << "]";
  out << ": " << std::flush;
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("input ended before the configuration was complete");
  const auto t = trim(line);
  return t.empty() ? def : std::string(t);
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, ',')) {
    const auto t = trim(item);
    if (!t.empty()) out.emplace_back(t);
  }
  return out;
}

}  // namespace detail

// Prompt-driven configuration, in the order of the trial setup wizard.
inline Built interactive_config(std::istream& in, std::ostream& out) {
  using detail::ask;
  const std::string type = ask(in, out, "trial type (solo, dyad, group)", "group");
  if (type == "solo") {
    SoloArgs a;
    a.player = ask(in, out, "player id", "");
    a.kind = ask(in, out, "motion kind (sinusoidal, free)", "free");
    a.duration_s = parse_double(ask(in, out, "duration s", "60"), "duration");
    return build_solo(a);
  }
  if (type == "dyad") {
    DyadArgs a;
    a.kind = ask(in, out, "dyad kind (hp_hp, hp_vp)", "hp_hp");
    a.roles = detail::split_list(ask(in, out, "roles of players 1,2", "leader,follower"));
    a.duration_s = parse_double(ask(in, out, "duration s", "30"), "duration");
    if (a.kind == "hp_vp") {
      a.vp_number = static_cast<std::size_t>(parse_int(ask(in, out, "VP player number", "2"), "VP index"));
      const std::string f = ask(in, out, "VP configuration file (empty for defaults)", "");
      if (!f.empty()) a.vp_text = read_text_file(f);
    }
    return build_dyad(a);
  }
  if (type == "group") {
    GroupArgs a;
    a.topology_text = read_text_file(ask(in, out, "topology matrix file", ""));
    a.duration_s = parse_double(ask(in, out, "duration s", "30"), "duration");
    for (const auto& s : detail::split_list(ask(in, out, "virtual players as N=FILE, comma separated", "")))
      for (auto& vp : read_vp_specs({s})) a.vps.push_back(std::move(vp));
    return build_group(a);
  }
  throw ValidationError("unknown trial type '" + type + "'");
}

// Entry point of the administrator tool. Returns the process exit code.
inline int run_admin(int argc, const char* const* argv, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Configure, launch and analyze coordination trials"};
  app.require_subcommand(1);
  std::string server = "127.0.0.1:7878";
  app.add_option("--server", server, "session server host:port")->capture_default_str();

  LaunchOptions lo;
  auto launch_flags = [&](CLI::App* c) {
    c->add_flag("--print-config", lo.print_config, "print the configuration and defaults instead of launching");
    c->add_flag("--wait", lo.wait, "block until the trial ends and list the persisted files");
  };

  SoloArgs solo;
  auto* c_solo = app.add_subcommand("solo", "record a motor signature");
  c_solo->add_option("--player", solo.player, "player id")->required();
  c_solo->add_option("--kind", solo.kind, "motion kind")->required()->check(CLI::IsMember({"sinusoidal", "free"}));
  c_solo->add_option("--duration", solo.duration_s, "seconds")->capture_default_str();
  c_solo->add_option("--trial", solo.trial, "trial number (default: next free)");
  c_solo->add_option("--set", solo.sets, "extra key=value");
  launch_flags(c_solo);

  DyadArgs dyad;
  std::string roles;
  std::string vp_file;
  auto* c_dyad = app.add_subcommand("dyad", "launch a dyadic trial");
  c_dyad->add_option("--kind", dyad.kind, "hp_hp or hp_vp")->check(CLI::IsMember({"hp_hp", "hp_vp"}))->capture_default_str();
  c_dyad->add_option("--roles", roles, "roles of players 1,2 (leader,follower | joint)")->required();
  c_dyad->add_option("--duration", dyad.duration_s, "seconds")->capture_default_str();
  c_dyad->add_option("--vp-index", dyad.vp_number, "player number of the VP")->capture_default_str();
  c_dyad->add_option("--vp", vp_file, "VP configuration file (key=value lines)");
  c_dyad->add_option("--model", dyad.model, "VP model (hkb, harmonic)");
  c_dyad->add_option("--controller", dyad.controller, "VP controller (pd, adaptive)");
  c_dyad->add_option("--signature", dyad.signature, "signature owner/kind fed to the VP");
  c_dyad->add_option("--trial", dyad.trial, "trial number (default: next free)");
  c_dyad->add_option("--set", dyad.sets, "extra key=value");
  launch_flags(c_dyad);

  GroupArgs group;
  std::string topology_file;
  std::vector<std::string> vp_specs;
  auto* c_group = app.add_subcommand("group", "launch a group trial");
  c_group->add_option("--topology", topology_file, "0/1 matrix file")->required();
  c_group->add_option("--duration", group.duration_s, "seconds")->capture_default_str();
  c_group->add_option("--vp", vp_specs, "virtual player N=FILE (repeatable)");
  c_group->add_option("--trial", group.trial, "trial number (default: next free)");
  c_group->add_option("--set", group.sets, "extra key=value");
  launch_flags(c_group);

  std::string config_file;
  auto* c_launch = app.add_subcommand("launch", "launch a trial from a configuration file");
  c_launch->add_option("config", config_file, "configuration text file")->required();
  launch_flags(c_launch);

  auto* c_inter = app.add_subcommand("interactive", "answer prompts to configure a trial");
  launch_flags(c_inter);

  std::vector<std::string> files;
  std::string analyze_topology, analyze_out;
  bool summary = false;
  auto* c_analyze = app.add_subcommand("analyze", "synchronization report for persisted trial files");
  c_analyze->add_option("files", files, "player files of one trial")->required();
  c_analyze->add_option("--topology", analyze_topology, "0/1 matrix file (default: from the trial record)");
  c_analyze->add_option("--out", analyze_out, "also write the report to this file");
  c_analyze->add_flag("--summary", summary, "print name/value records instead of tables");

  auto* c_sigs = app.add_subcommand("signatures", "stored motor signatures");
  c_sigs->require_subcommand(1);
  auto* c_list = c_sigs->add_subcommand("list", "list stored signatures");
  std::string show_owner, show_kind;
  std::optional<int> show_trial;
  auto* c_show = c_sigs->add_subcommand("show", "print one signature");
  c_show->add_option("owner", show_owner)->required();
  c_show->add_option("kind", show_kind)->required()->check(CLI::IsMember({"sinusoidal", "free"}));
  c_show->add_option("--trial", show_trial, "trial number (default: latest)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    const ServerAddress addr = parse_server_address(server);
    if (c_solo->parsed()) return launch(build_solo(solo), lo, addr, out);
    if (c_dyad->parsed()) {
      dyad.roles = detail::split_list(roles);
      if (!vp_file.empty()) dyad.vp_text = read_text_file(vp_file);
      return launch(build_dyad(dyad), lo, addr, out);
    }
    if (c_group->parsed()) {
      group.topology_text = read_text_file(topology_file);
      group.vps = read_vp_specs(vp_specs);
      return launch(build_group(group), lo, addr, out);
    }
    if (c_launch->parsed()) {
      Built b;
      b.text = read_text_file(config_file);
      b.parsed = parse_trial_config(b.text, true);
      for (const auto& [k, v] : b.parsed.extra)
        if (k != "session") throw ValidationError("unknown configuration key '" + k + "'");
      return launch(b, lo, addr, out);
    }
    if (c_inter->parsed()) return launch(interactive_config(in, out), lo, addr, out);
    if (c_analyze->parsed()) {
      std::optional<Topology> topo;
      std::vector<fs::path> paths(files.begin(), files.end());
      if (!analyze_topology.empty()) {
        const auto n = parse_trial_file_name(paths.front().filename().string());
        const TrialType type = n && n->n_players == 2 ? TrialType::dyadic_hp_hp : TrialType::group;
        topo = validate_topology(parse_topology_matrix(read_text_file(analyze_topology)), type);
      }
      const TrialReport report = analyze_trial(load_trial_for_analysis(paths, topo));
      std::ostringstream text;
      if (summary) write_report_summary(text, report);
      else write_report_table(text, report);
      out << text.str();
      if (!analyze_out.empty()) {
        std::ofstream f(analyze_out);
        if (!(f << text.str())) throw IoError("cannot write " + analyze_out);
      }
      return kExitOk;
    }
    if (c_list->parsed()) {
      Client client(addr.host, addr.port);
      const auto r = client.request(wire::encode(wire::ListSignatures{}));
      out << "owner  kind  trial  file\n";
      for (const auto& e : r.body.at("entries"))
        out << e.at("owner").get<std::string>() << "  " << e.at("kind").get<std::string>() << "  "
            << e.at("trial").get<int>() << "  " << e.at("file").get<std::string>() << '\n';
      return kExitOk;
    }
    if (c_show->parsed()) {
      Client client(addr.host, addr.port);
      const auto r = client.request(
          wire::encode(wire::GetSignature{show_owner, parse_motion_kind(show_kind), show_trial}));
      const auto& ms = r.body.at("ms");
      const auto& x = r.body.at("x");
      const auto& v = r.body.at("v");
      out << "# " << r.body.at("owner").get<std::string>() << ' ' << r.body.at("kind").get<std::string>()
          << " trial " << r.body.at("trial").get<int>() << " (ms x v)\n";
      for (std::size_t k = 0; k < ms.size(); ++k)
        out << format_double(ms[k].get<double>()) << ' ' << format_double(x[k].get<double>()) << ' '
            << format_double(v[k].get<double>()) << '\n';
      return kExitOk;
    }
  } catch (const net::UnreachableError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUnreachable;
  } catch (const ValidationError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NotFoundError& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitFailure;
}

}  // namespace chronos::admin
