#pragma once

#include <array>
#include <optional>
#include <string>
#include <string_view>
#include <utility>

#include "chronos/error.hpp"

namespace chronos {

// Game area in dm. Every position on the wire and in files lives in [0, kGameAreaDm].
inline constexpr double kGameAreaDm = 10.0;
inline constexpr double kGameCenterDm = kGameAreaDm / 2.0;

inline constexpr std::size_t kMinGroupPlayers = 3;
inline constexpr std::size_t kMaxGroupPlayers = 7;

enum class TrialType { solo, dyadic_hp_hp, dyadic_hp_vp, group };
enum class Role { leader, follower, joint_improviser, none };
enum class MotionKind { sinusoidal, free };

namespace detail {

template <typename E, std::size_t N>
std::optional<E> lookup(const std::array<std::pair<E, std::string_view>, N>& table,
                        std::string_view name) {
  for (const auto& [value, text] : table) {
    if (text == name) return value;
  }
  return std::nullopt;
}

template <typename E, std::size_t N>
std::string_view name_of(const std::array<std::pair<E, std::string_view>, N>& table, E value) {
  for (const auto& [v, text] : table) {
    if (v == value) return text;
  }
  return "?";
}

inline constexpr std::array<std::pair<TrialType, std::string_view>, 4> kTrialTypeNames{{
    {TrialType::solo, "solo"},
    {TrialType::dyadic_hp_hp, "dyadic_hp_hp"},
    {TrialType::dyadic_hp_vp, "dyadic_hp_vp"},
    {TrialType::group, "group"},
}};

inline constexpr std::array<std::pair<Role, std::string_view>, 4> kRoleNames{{
    {Role::leader, "leader"},
    {Role::follower, "follower"},
    {Role::joint_improviser, "joint"},
    {Role::none, "none"},
}};

inline constexpr std::array<std::pair<MotionKind, std::string_view>, 2> kMotionNames{{
    {MotionKind::sinusoidal, "sinusoidal"},
    {MotionKind::free, "free"},
}};

}  // namespace detail

inline std::string_view to_string(TrialType t) { return detail::name_of(detail::kTrialTypeNames, t); }
inline std::string_view to_string(Role r) { return detail::name_of(detail::kRoleNames, r); }
inline std::string_view to_string(MotionKind k) { return detail::name_of(detail::kMotionNames, k); }

inline TrialType parse_trial_type(std::string_view s) {
  if (auto v = detail::lookup(detail::kTrialTypeNames, s)) return *v;
  throw ValidationError("unknown trial type '" + std::string(s) + "'");
}

// Accepts both the wire token "joint" and the long form "joint_improviser".
inline Role parse_role(std::string_view s) {
  if (s == "joint_improviser") return Role::joint_improviser;
  if (auto v = detail::lookup(detail::kRoleNames, s)) return *v;
  throw ValidationError("unknown role '" + std::string(s) + "'");
}

inline MotionKind parse_motion_kind(std::string_view s) {
  if (auto v = detail::lookup(detail::kMotionNames, s)) return *v;
  throw ValidationError("unknown motion kind '" + std::string(s) + "' (expected sinusoidal|free)");
}

inline bool is_dyadic(TrialType t) {
  return t == TrialType::dyadic_hp_hp || t == TrialType::dyadic_hp_vp;
}

}  // namespace chronos
