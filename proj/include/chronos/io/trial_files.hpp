#pragma once

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "chronos/core/trial_record.hpp"
#include "chronos/io/text.hpp"

namespace chronos {

namespace fs = std::filesystem;

// P{Np}_0{Nt}_{Z}_1d.txt. Z is the player label: "<owner>_<kind>" for solo,
// L/F for leader-follower dyads, JI1/JI2 for joint improvisation, the 1-based
// index for group trials.
inline std::string player_label(const TrialConfig& cfg, std::size_t index) {
  switch (cfg.trial_type) {
    case TrialType::solo:
      return cfg.solo_owner + "_" + std::string(to_string(cfg.solo_kind));
    case TrialType::dyadic_hp_hp:
    case TrialType::dyadic_hp_vp:
      switch (cfg.role_of(index)) {
        case Role::leader: return "L";
        case Role::follower: return "F";
        default: return "JI" + std::to_string(index + 1);
      }
    case TrialType::group:
      return std::to_string(index + 1);
  }
  return {};
}

inline std::string trial_file_name(std::size_t n_players, int trial_number, const std::string& label) {
  return "P" + std::to_string(n_players) + "_0" + std::to_string(trial_number) + "_" + label + "_1d.txt";
}

inline std::string trial_file_name(const TrialConfig& cfg, std::size_t index) {
  return trial_file_name(cfg.n_players(), cfg.trial_number, player_label(cfg, index));
}

struct ParsedFileName {
  std::size_t n_players = 0;
  int trial_number = 0;
  std::string label;
};

inline std::optional<ParsedFileName> parse_trial_file_name(const std::string& name) {
  static const std::regex re(R"(^P(\d+)_0(\d+)_(.+)_1d\.txt$)");
  std::smatch m;
  if (!std::regex_match(name, m, re)) return std::nullopt;
  return ParsedFileName{static_cast<std::size_t>(std::stoul(m[1])), std::stoi(m[2]), m[3]};
}

// Two columns (time ms, position dm), three for solo (plus velocity dm/s).
inline void write_player_file(const fs::path& path, const PlayerRecord& p) {
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw IoError("cannot write " + path.string());
  for (std::size_t k = 0; k < p.position.size(); ++k) {
    out << format_double(p.position.time_at(k)) << ' ' << format_double(p.position.samples[k]);
    if (p.velocity) out << ' ' << format_double(p.velocity->samples.at(k));
    out << '\n';
  }
  if (!out) throw IoError("failed writing " + path.string());
}

inline std::vector<fs::path> write_trial(const fs::path& dir, const TrialRecord& rec) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  std::vector<fs::path> written;
  for (const auto& p : rec.players) {
    const auto path = dir / trial_file_name(rec.config, p.index);
    write_player_file(path, p);
    written.push_back(path);
  }
  return written;
}

struct PlayerFile {
  Trajectory position;
  std::optional<Trajectory> velocity;
};

// Sampling rate from the timestamps, rounded to micro-hertz so rates written
// as 1000/rate multiples come back exact.
inline double infer_rate_hz(double t0, double t_last, std::size_t n) {
  if (n < 2 || !(t_last > t0)) throw ValidationError("cannot infer a sampling rate from fewer than 2 timestamps");
  const double raw = static_cast<double>(n - 1) * 1000.0 / (t_last - t0);
  return std::round(raw * 1e6) / 1e6;
}

inline PlayerFile read_player_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read " + path.string());
  std::vector<double> t, x, v;
  std::string line;
  std::size_t columns = 0, lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (trim(line).empty()) continue;
    std::istringstream row(line);
    std::vector<std::string> cells;
    std::string c;
    while (row >> c) cells.push_back(c);
    if (columns == 0) columns = cells.size();
    if (cells.size() != columns || (columns != 2 && columns != 3))
      throw ValidationError(path.filename().string() + ":" + std::to_string(lineno) + ": expected 2 or 3 columns");
    t.push_back(parse_double(cells[0], "time"));
    x.push_back(parse_double(cells[1], "position"));
    if (columns == 3) v.push_back(parse_double(cells[2], "velocity"));
  }
  if (t.size() < 2) throw ValidationError(path.filename().string() + ": too few samples");
  for (std::size_t i = 1; i < t.size(); ++i)
    if (!(t[i] > t[i - 1])) throw ValidationError(path.filename().string() + ": timestamps must increase");

  PlayerFile f;
  f.position.t0_ms = t.front();
  f.position.rate_hz = infer_rate_hz(t.front(), t.back(), t.size());
  f.position.samples = std::move(x);
  if (columns == 3) f.velocity = Trajectory{f.position.t0_ms, f.position.rate_hz, std::move(v)};
  return f;
}

// Reassemble a trial from its player files. The files carry no topology, so
// group trials default to the complete graph unless one is supplied.
inline TrialRecord load_trial(const std::vector<fs::path>& files, const std::optional<Topology>& topology = {}) {
  if (files.empty()) throw ValidationError("no trial files given");
  std::map<std::size_t, std::pair<std::string, PlayerFile>> by_index;
  std::optional<ParsedFileName> first;
  TrialConfig cfg;

  for (const auto& path : files) {
    const auto parsed = parse_trial_file_name(path.filename().string());
    if (!parsed) throw ValidationError("not a trial file name: " + path.filename().string());
    if (!first) first = parsed;
    if (parsed->n_players != first->n_players || parsed->trial_number != first->trial_number)
      throw ValidationError("files belong to different trials");

    std::size_t index = 0;
    const std::string& z = parsed->label;
    if (parsed->n_players == 1) {
      const auto cut = z.rfind('_');
      if (cut == std::string::npos) throw ValidationError("solo file name lacks a motion kind: " + z);
      cfg.solo_owner = z.substr(0, cut);
      cfg.solo_kind = parse_motion_kind(z.substr(cut + 1));
    } else if (parsed->n_players == 2) {
      if (z == "L" || z == "F") {
        // The leader is listed first.
        index = z == "L" ? 0 : 1;
        cfg.roles[index] = z == "L" ? Role::leader : Role::follower;
      } else if (z == "JI1" || z == "JI2") {
        index = z == "JI1" ? 0 : 1;
        cfg.roles[index] = Role::joint_improviser;
      } else {
        throw ValidationError("unknown dyadic player label: " + z);
      }
    } else {
      const long i = parse_int(z, "player index");
      if (i < 1 || static_cast<std::size_t>(i) > parsed->n_players)
        throw ValidationError("player index out of range in " + path.filename().string());
      index = static_cast<std::size_t>(i - 1);
    }
    if (!by_index.emplace(index, std::pair{z, read_player_file(path)}).second)
      throw ValidationError("duplicate player file for " + z);
  }

  const std::size_t n = first->n_players;
  if (by_index.size() != n)
    throw ValidationError("expected " + std::to_string(n) + " player files, got " + std::to_string(by_index.size()));

  cfg.trial_number = first->trial_number;
  cfg.trial_type = n == 1 ? TrialType::solo : n == 2 ? TrialType::dyadic_hp_hp : TrialType::group;
  cfg.topology = validate_topology(topology ? topology->adjacency() : topologies::complete(n), cfg.trial_type);

  TrialRecord rec;
  for (auto& [index, entry] : by_index) {
    PlayerRecord p;
    p.index = index;
    p.position = std::move(entry.second.position);
    p.velocity = std::move(entry.second.velocity);
    rec.players.push_back(std::move(p));
  }
  const auto& p0 = rec.players.front().position;
  cfg.record_rate_hz = p0.rate_hz;
  cfg.duration_s = static_cast<double>(p0.size()) / p0.rate_hz;
  rec.config = std::move(cfg);
  return rec;
}

// Next free trial number for files of this player count and label in dir.
inline int next_trial_number(const fs::path& dir, std::size_t n_players, const std::string& label) {
  int next = 1;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) return next;
  for (const auto& e : fs::directory_iterator(dir, ec)) {
    const auto p = parse_trial_file_name(e.path().filename().string());
    if (p && p->n_players == n_players && p->label == label) next = std::max(next, p->trial_number + 1);
  }
  return next;
}

}  // namespace chronos
