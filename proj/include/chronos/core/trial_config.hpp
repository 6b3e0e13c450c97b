#pragma once

#include <map>
#include <optional>
#include <string>

#include "chronos/core/topology.hpp"
#include "chronos/core/types.hpp"
#include "chronos/dynamics/params.hpp"
#include "chronos/error.hpp"

namespace chronos {

// Everything the administrator chooses before a trial. Player keys are
// 0-based topology indices.
struct TrialConfig {
  TrialType trial_type = TrialType::group;
  double duration_s = 30.0;
  Topology topology;
  std::map<std::size_t, Role> roles;
  std::map<std::size_t, VirtualPlayerConfig> vp_configs;
  double record_rate_hz = 10.0;
  int trial_number = 1;
  // Solo trials only: who is recording and what kind of motion.
  std::string solo_owner;
  MotionKind solo_kind = MotionKind::free;

  std::size_t n_players() const { return topology.size(); }
  bool is_virtual(std::size_t i) const { return vp_configs.count(i) != 0; }
  Role role_of(std::size_t i) const {
    auto it = roles.find(i);
    return it == roles.end() ? Role::none : it->second;
  }
  std::size_t n_humans() const { return n_players() - vp_configs.size(); }

  bool operator==(const TrialConfig&) const = default;
};

inline bool is_leader_follower(const TrialConfig& c) {
  for (const auto& [i, r] : c.roles)
    if (r == Role::leader || r == Role::follower) return true;
  return false;
}

inline void validate(const TrialConfig& c) {
  if (!(c.duration_s > 0.0) || !std::isfinite(c.duration_s))
    throw ValidationError("trial duration must be positive");
  if (!(c.record_rate_hz > 0.0) || !std::isfinite(c.record_rate_hz))
    throw ValidationError("record rate must be positive");
  if (c.trial_number < 0) throw ValidationError("trial number must be nonnegative");
  // Re-validate so hand-assembled configs cannot bypass the topology rules.
  (void)validate_topology(c.topology.adjacency(), c.trial_type);

  const std::size_t n = c.n_players();
  for (const auto& [i, r] : c.roles)
    if (i >= n) throw ValidationError("role assigned to player " + std::to_string(i + 1) + " outside the topology");
  for (const auto& [i, vp] : c.vp_configs) {
    if (i >= n) throw ValidationError("VP index " + std::to_string(i + 1) + " outside the topology");
    validate(vp);
    if (c.topology.neighbors_of(i).empty())
      throw ValidationError("VP " + std::to_string(i + 1) + " sees no other player");
  }

  switch (c.trial_type) {
    case TrialType::solo:
      if (!c.vp_configs.empty()) throw ValidationError("solo trials have no virtual players");
      if (c.solo_owner.empty()) throw ValidationError("solo trials need a player id");
      break;
    case TrialType::dyadic_hp_hp:
    case TrialType::dyadic_hp_vp: {
      const std::size_t want_vps = c.trial_type == TrialType::dyadic_hp_vp ? 1 : 0;
      if (c.vp_configs.size() != want_vps)
        throw ValidationError(std::string(to_string(c.trial_type)) + " trials need exactly " +
                              std::to_string(want_vps) + " virtual player(s)");
      const Role r0 = c.role_of(0), r1 = c.role_of(1);
      const bool lf = (r0 == Role::leader && r1 == Role::follower) ||
                      (r0 == Role::follower && r1 == Role::leader);
      const bool ji = r0 == Role::joint_improviser && r1 == Role::joint_improviser;
      if (r0 == Role::leader && r1 == Role::leader)
        throw ValidationError("role conflict: two leaders in a leader-follower trial");
      if (!lf && !ji)
        throw ValidationError("dyadic roles must be leader+follower or joint+joint");
      if (ji && c.trial_type == TrialType::dyadic_hp_vp)
        throw ValidationError("virtual players cannot act as joint improvisers");
      for (const auto& [i, vp] : c.vp_configs) {
        const VpMode want = c.role_of(i) == Role::leader ? VpMode::leader : VpMode::follower;
        if (vp.control.mode != want)
          throw ValidationError("VP mode does not match its dyadic role");
      }
      break;
    }
    case TrialType::group:
      for (const auto& [i, vp] : c.vp_configs) {
        const Role r = c.role_of(i);
        if (r != Role::none && r != (vp.control.mode == VpMode::leader ? Role::leader : Role::follower))
          throw ValidationError("VP " + std::to_string(i + 1) + " role does not match its mode");
      }
      break;
  }
}

}  // namespace chronos
