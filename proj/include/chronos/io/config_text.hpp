#pragma once

#include <algorithm>
#include <functional>
#include <optional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "chronos/core/trial_config.hpp"
#include "chronos/io/text.hpp"

namespace chronos {

// Text form of a trial configuration:
//
//   trial_type=group
//   duration_s=30
//   role.2=follower
//   vp.5.model=hkb
//   vp.5.mode=leader
//   vp.5.signature=Sample/sinusoidal
//   topology:
//   0 1 1 1 1
//   ...
//
// Player numbers are 1-based. Everything after "topology:" is the 0/1 matrix.

using KeyValues = std::map<std::string, std::string>;

struct ParsedConfig {
  TrialConfig config;
  std::vector<std::string> defaults_applied;  // "key=value" for every unset parameter
  KeyValues extra;                            // keys this parser does not own
};

namespace detail {

inline void split_config_text(const std::string& text, KeyValues& kv, std::string& matrix) {
  std::istringstream in(text);
  std::string line;
  bool in_matrix = false;
  while (std::getline(in, line)) {
    const auto t = trim(line);
    if (in_matrix) {
      matrix += std::string(t) + "\n";
      continue;
    }
    if (t.empty() || t.front() == '#') continue;
    if (t == "topology:") {
      in_matrix = true;
      continue;
    }
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) throw ValidationError("expected key=value, got '" + std::string(t) + "'");
    std::string key(trim(t.substr(0, eq)));
    if (!kv.emplace(key, std::string(trim(t.substr(eq + 1)))).second)
      throw ValidationError("duplicate key '" + key + "'");
  }
}

inline SignatureRef parse_signature_ref(std::string_view s) {
  const auto slash = s.find('/');
  if (slash == std::string_view::npos || slash == 0)
    throw ValidationError("signature must be written owner/kind, got '" + std::string(s) + "'");
  return {std::string(s.substr(0, slash)), parse_motion_kind(s.substr(slash + 1))};
}

}  // namespace detail

// VP parameters from keys "<prefix>model", "<prefix>kp", ... Consumed keys are
// erased from kv; unset parameters get platform defaults and are reported.
inline VirtualPlayerConfig parse_vp_keys(KeyValues& kv, const std::string& prefix,
                                         std::vector<std::string>& defaults_applied) {
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(prefix + key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  VirtualPlayerConfig vp;
  auto model = take("model");
  auto controller = take("controller");
  auto mode = take("mode");
  if (!mode) throw ValidationError(prefix + "mode is required (leader|follower)");
  vp.dynamics.model = model ? parse_dynamics_model(*model) : DynamicsModel::hkb;
  if (!model) defaults_applied.push_back(prefix + "model=hkb");
  const ControllerKind kind = controller ? parse_controller(*controller) : ControllerKind::pd;
  if (!controller) defaults_applied.push_back(prefix + "controller=pd");
  vp.control = default_controller(kind, parse_vp_mode(*mode));

  auto number = [&](const std::string& key, double& field) {
    if (auto v = take(key)) field = parse_double(*v, prefix + key);
    else defaults_applied.push_back(prefix + key + "=" + format_double(field));
  };
  number("a", vp.dynamics.a);
  number("b", vp.dynamics.b);
  number("alpha", vp.dynamics.alpha);
  number("beta", vp.dynamics.beta);
  number("gamma", vp.dynamics.gamma);
  number("omega", vp.dynamics.omega);
  number("kp", vp.control.kp);
  number("ksigma", vp.control.ksigma);
  number("c", vp.control.c);
  number("delta", vp.control.delta);
  number("k", vp.control.k);
  if (auto s = take("signature")) vp.signature = detail::parse_signature_ref(*s);
  return vp;
}

inline void write_vp_keys(std::ostream& out, const VirtualPlayerConfig& vp, const std::string& prefix) {
  out << prefix << "model=" << to_string(vp.dynamics.model) << '\n'
      << prefix << "controller=" << to_string(vp.control.controller) << '\n'
      << prefix << "mode=" << to_string(vp.control.mode) << '\n'
      << prefix << "a=" << format_double(vp.dynamics.a) << '\n'
      << prefix << "b=" << format_double(vp.dynamics.b) << '\n'
      << prefix << "alpha=" << format_double(vp.dynamics.alpha) << '\n'
      << prefix << "beta=" << format_double(vp.dynamics.beta) << '\n'
      << prefix << "gamma=" << format_double(vp.dynamics.gamma) << '\n'
      << prefix << "omega=" << format_double(vp.dynamics.omega) << '\n'
      << prefix << "kp=" << format_double(vp.control.kp) << '\n'
      << prefix << "ksigma=" << format_double(vp.control.ksigma) << '\n'
      << prefix << "c=" << format_double(vp.control.c) << '\n'
      << prefix << "delta=" << format_double(vp.control.delta) << '\n'
      << prefix << "k=" << format_double(vp.control.k) << '\n';
  if (vp.signature)
    out << prefix << "signature=" << vp.signature->owner << '/' << to_string(vp.signature->kind) << '\n';
}

// Standalone VP form (no prefix), as accepted by the admin tool.
inline VirtualPlayerConfig parse_vp_config(const std::string& text, std::vector<std::string>* defaults = nullptr) {
  KeyValues kv;
  std::string matrix;
  detail::split_config_text(text, kv, matrix);
  if (!matrix.empty()) throw ValidationError("VP configuration cannot hold a topology");
  std::vector<std::string> applied;
  auto vp = parse_vp_keys(kv, "", applied);
  if (!kv.empty()) throw ValidationError("unknown VP key '" + kv.begin()->first + "'");
  validate(vp);
  if (defaults) *defaults = std::move(applied);
  return vp;
}

inline std::string serialize_trial_config(const TrialConfig& c) {
  std::ostringstream out;
  out << "trial_type=" << to_string(c.trial_type) << '\n'
      << "duration_s=" << format_double(c.duration_s) << '\n'
      << "record_rate_hz=" << format_double(c.record_rate_hz) << '\n'
      << "trial_number=" << c.trial_number << '\n';
  if (c.trial_type == TrialType::solo)
    out << "solo_owner=" << c.solo_owner << '\n' << "solo_kind=" << to_string(c.solo_kind) << '\n';
  for (const auto& [i, r] : c.roles) out << "role." << i + 1 << '=' << to_string(r) << '\n';
  for (const auto& [i, vp] : c.vp_configs) write_vp_keys(out, vp, "vp." + std::to_string(i + 1) + ".");
  out << "topology:\n";
  write_topology(out, c.topology);
  return out.str();
}

// Strict unless keep_extra: unknown keys are returned in extra instead of rejected.
inline ParsedConfig parse_trial_config(const std::string& text, bool keep_extra = false) {
  KeyValues kv;
  std::string matrix;
  detail::split_config_text(text, kv, matrix);

  ParsedConfig out;
  TrialConfig& c = out.config;
  auto take = [&](const std::string& key) -> std::optional<std::string> {
    auto it = kv.find(key);
    if (it == kv.end()) return std::nullopt;
    std::string v = it->second;
    kv.erase(it);
    return v;
  };

  auto type = take("trial_type");
  if (!type) throw ValidationError("trial_type is required");
  c.trial_type = parse_trial_type(*type);
  if (auto v = take("duration_s")) c.duration_s = parse_double(*v, "duration_s");
  else out.defaults_applied.push_back("duration_s=" + format_double(c.duration_s));
  if (auto v = take("record_rate_hz")) c.record_rate_hz = parse_double(*v, "record_rate_hz");
  else out.defaults_applied.push_back("record_rate_hz=" + format_double(c.record_rate_hz));
  if (auto v = take("trial_number")) c.trial_number = static_cast<int>(parse_int(*v, "trial_number"));
  if (auto v = take("solo_owner")) c.solo_owner = *v;
  if (auto v = take("solo_kind")) c.solo_kind = parse_motion_kind(*v);

  if (matrix.empty()) {
    if (c.trial_type != TrialType::solo) throw ValidationError("a topology block is required");
    matrix = "0\n";
  }
  c.topology = validate_topology(parse_topology_matrix(matrix), c.trial_type);
  const std::size_t n = c.topology.size();

  auto player_of = [&](const std::string& text) {
    const long i = parse_int(text, "player number");
    if (i < 1 || static_cast<std::size_t>(i) > n)
      throw ValidationError("player number " + text + " outside 1.." + std::to_string(n));
    return static_cast<std::size_t>(i - 1);
  };

  // Collect VP indices first: their keys are consumed as a group.
  std::vector<std::string> vp_prefixes;
  for (const auto& [key, value] : kv) {
    if (key.rfind("vp.", 0) != 0) continue;
    const auto dot = key.find('.', 3);
    if (dot == std::string::npos) throw ValidationError("malformed VP key '" + key + "'");
    const std::string prefix = key.substr(0, dot + 1);
    if (std::find(vp_prefixes.begin(), vp_prefixes.end(), prefix) == vp_prefixes.end()) vp_prefixes.push_back(prefix);
  }
  for (const auto& prefix : vp_prefixes) {
    const std::size_t i = player_of(prefix.substr(3, prefix.size() - 4));
    c.vp_configs[i] = parse_vp_keys(kv, prefix, out.defaults_applied);
  }
  for (auto it = kv.begin(); it != kv.end();) {
    if (it->first.rfind("role.", 0) == 0) {
      c.roles[player_of(it->first.substr(5))] = parse_role(it->second);
      it = kv.erase(it);
    } else {
      ++it;
    }
  }
  if (!kv.empty()) {
    if (!keep_extra) throw ValidationError("unknown configuration key '" + kv.begin()->first + "'");
    out.extra = std::move(kv);
  }
  validate(c);
  return out;
}

}  // namespace chronos
