#pragma once

#include <optional>
#include <vector>

#include "chronos/core/trajectory.hpp"
#include "chronos/core/trial_config.hpp"

namespace chronos {

struct PlayerRecord {
  std::size_t index = 0;  // 0-based topology index
  bool is_virtual = false;
  Trajectory position;
  std::optional<Trajectory> velocity;  // solo trials only

  bool operator==(const PlayerRecord&) const = default;
};

struct TrialRecord {
  TrialConfig config;
  std::vector<PlayerRecord> players;  // ordered by index
  bool partial = false;

  bool operator==(const TrialRecord&) const = default;
};

}  // namespace chronos
