#pragma once

#include <set>
#include <sstream>

#include "chronos/io/config_text.hpp"
#include "chronos/sim/harness.hpp"

namespace chronos::sim {

// Scenario text: a trial configuration plus scripted players and seeds.
//
//   seed=7
//   synth.Sample.freq=0.25          # sinusoidal signature Sample/sinusoidal
//   synth.Sample.amplitude=2        #   (also .duration, seconds)
//   script.1.source=sinusoid        # sinusoid | signature | coupled_hkb
//   script.1.amplitude=1
//   script.1.freq=0.25
//   script.1.noise=0.05
//   script.2.source=signature
//   script.2.signature=Sample/sinusoidal
//   surrogates=auto                 # coupled-HKB surrogates for unscripted humans
//   trial_type=dyadic_hp_vp
//   ...
//   topology:
//   0 1
//   1 0
//
// Player numbers are 1-based, as in the configuration text.
struct Scenario {
  TrialConfig config;
  std::vector<std::string> defaults_applied;
  std::map<std::size_t, ScriptedPlayer> scripted;
  std::map<std::string, MotorSignature> synthesized;  // "owner/kind"
  std::uint64_t seed = 1;
  bool auto_surrogates = false;
};

namespace detail {

inline bool starts_with(std::string_view s, std::string_view p) { return s.substr(0, p.size()) == p; }

inline double take_double(KeyValues& kv, const std::string& key, double def) {
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  const double v = parse_double(it->second, key);
  kv.erase(it);
  return v;
}

inline std::string take_text(KeyValues& kv, const std::string& key, const std::string& def) {
  auto it = kv.find(key);
  if (it == kv.end()) return def;
  std::string v = it->second;
  kv.erase(it);
  return v;
}

}  // namespace detail

inline Scenario parse_scenario(const std::string& text, const SignatureStore* store = nullptr) {
  using detail::take_double;
  using detail::take_text;
  KeyValues kv;
  std::string matrix;
  chronos::detail::split_config_text(text, kv, matrix);

  Scenario sc;
  KeyValues script_keys, synth_keys;
  std::ostringstream rest;
  for (const auto& [k, v] : kv) {
    if (k == "seed") {
      const long s = parse_int(v, "seed");
      if (s < 0) throw ValidationError("seed must be nonnegative");
      sc.seed = static_cast<std::uint64_t>(s);
    } else if (k == "surrogates") {
      if (v != "auto" && v != "none") throw ValidationError("surrogates must be auto or none");
      sc.auto_surrogates = v == "auto";
    } else if (detail::starts_with(k, "script.")) {
      script_keys[k] = v;
    } else if (detail::starts_with(k, "synth.")) {
      synth_keys[k] = v;
    } else {
      rest << k << '=' << v << '\n';
    }
  }
  rest << "topology:\n" << matrix;
  ParsedConfig parsed = parse_trial_config(rest.str());
  sc.config = std::move(parsed.config);
  sc.defaults_applied = std::move(parsed.defaults_applied);

  // synth.<owner>.<field>
  std::set<std::string> owners;
  for (const auto& [k, v] : synth_keys) {
    const auto dot = k.find('.', 6);
    if (dot == std::string::npos) throw ValidationError("expected synth.<owner>.<field>, got '" + k + "'");
    owners.insert(k.substr(6, dot - 6));
  }
  for (const auto& owner : owners) {
    const std::string p = "synth." + owner + ".";
    const double f = take_double(synth_keys, p + "freq", 0.25);
    const double a = take_double(synth_keys, p + "amplitude", 2.0);
    const double d = take_double(synth_keys, p + "duration", 60.0);
    if (!(f > 0.0) || !(d > 0.0)) throw ValidationError("synthesized signature needs positive freq and duration");
    sc.synthesized.emplace(owner + "/sinusoidal", sinusoid_signature(owner, f, a, d));
  }
  if (!synth_keys.empty()) throw ValidationError("unknown scenario key '" + synth_keys.begin()->first + "'");

  auto signature = [&](const std::string& ref) {
    if (auto it = sc.synthesized.find(ref); it != sc.synthesized.end()) return it->second;
    const SignatureRef r = chronos::detail::parse_signature_ref(ref);
    if (!store) throw NotFoundError("signature " + ref + " is neither synthesized nor in a store");
    return store->load(r.owner, r.kind);
  };

  std::set<std::size_t> indices;
  for (const auto& [k, v] : script_keys) {
    const auto dot = k.find('.', 7);
    if (dot == std::string::npos) throw ValidationError("expected script.<n>.<field>, got '" + k + "'");
    const long n = parse_int(std::string_view(k).substr(7, dot - 7), "scripted player number");
    if (n < 1) throw ValidationError("scripted player numbers start at 1");
    indices.insert(static_cast<std::size_t>(n));
  }
  for (const std::size_t n : indices) {
    const std::string p = "script." + std::to_string(n) + ".";
    ScriptedPlayer sp;
    const std::string source = take_text(script_keys, p + "source", "sinusoid");
    if (source == "sinusoid") {
      Sinusoid s;
      s.amplitude_dm = take_double(script_keys, p + "amplitude", s.amplitude_dm);
      s.freq_hz = take_double(script_keys, p + "freq", s.freq_hz);
      s.phase_rad = take_double(script_keys, p + "phase", s.phase_rad);
      sp.source = s;
    } else if (source == "signature") {
      const std::string ref = take_text(script_keys, p + "signature", "");
      if (ref.empty()) throw ValidationError(p + "signature is required for a signature source");
      sp.source = SignatureSource{signature(ref)};
    } else if (source == "coupled_hkb") {
      CoupledHkb c;
      c.dynamics.alpha = take_double(script_keys, p + "alpha", c.dynamics.alpha);
      c.dynamics.beta = take_double(script_keys, p + "beta", c.dynamics.beta);
      c.dynamics.gamma = take_double(script_keys, p + "gamma", c.dynamics.gamma);
      c.dynamics.omega = 2.0 * std::numbers::pi * take_double(script_keys, p + "freq", c.dynamics.omega / (2.0 * std::numbers::pi));
      c.coupling = take_double(script_keys, p + "coupling", c.coupling);
      c.x0 = take_double(script_keys, p + "x0", c.x0);
      c.v0 = take_double(script_keys, p + "v0", c.v0);
      sp.source = c;
    } else {
      throw ValidationError("unknown script source '" + source + "'");
    }
    sp.noise_std_dm = take_double(script_keys, p + "noise", 0.0);
    const double seed = take_double(script_keys, p + "seed", 0.0);
    if (seed < 0.0 || seed != std::floor(seed)) throw ValidationError(p + "seed must be a nonnegative integer");
    sp.seed = static_cast<std::uint64_t>(seed);
    validate(sp);
    sc.scripted[n - 1] = sp;
  }
  if (!script_keys.empty()) throw ValidationError("unknown scenario key '" + script_keys.begin()->first + "'");

  if (sc.auto_surrogates) {
    std::vector<std::size_t> missing;
    for (std::size_t i = 0; i < sc.config.n_players(); ++i)
      if (!sc.config.is_virtual(i) && !sc.scripted.count(i)) missing.push_back(i);
    for (auto& [i, sp] : make_surrogates(missing, sc.seed)) sc.scripted[i] = sp;
  }
  return sc;
}

// Signatures the scenario's VPs need, by index.
inline std::map<std::size_t, MotorSignature> scenario_vp_signatures(const Scenario& sc, const SignatureStore* store) {
  std::map<std::size_t, MotorSignature> out;
  for (const auto& [i, vp] : sc.config.vp_configs) {
    if (!vp.signature) continue;
    const std::string ref = vp.signature->owner + "/" + std::string(to_string(vp.signature->kind));
    if (auto it = sc.synthesized.find(ref); it != sc.synthesized.end()) out.emplace(i, it->second);
    else if (store) out.emplace(i, store->load(vp.signature->owner, vp.signature->kind));
    else throw NotFoundError("signature " + ref + " is neither synthesized nor in a store");
  }
  return out;
}

// The eight five-player topologies of the group experiments.
inline std::vector<SweepCase> five_player_topology_cases(double duration_s = 30.0) {
  using namespace topologies;
  const std::vector<std::pair<std::string, Topology::Matrix>> shapes{
      {"complete", complete(5)},          {"ring", ring(5)},
      {"path", path(5)},                  {"star", star(5, 0)},
      {"directed complete", directed_complete(5)}, {"directed ring", directed_ring(5)},
      {"directed path", directed_path(5)}, {"directed star", directed_star(5, 0)}};
  std::vector<SweepCase> cases;
  for (const auto& [name, m] : shapes) {
    TrialConfig c;
    c.trial_type = TrialType::group;
    c.duration_s = duration_s;
    c.topology = validate_topology(m, TrialType::group);
    cases.push_back({name, c, {}});
  }
  return cases;
}

}  // namespace chronos::sim
