#pragma once

#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <regex>
#include <sstream>
#include <string>
#include <vector>

#include "chronos/core/spline.hpp"
#include "chronos/core/trajectory.hpp"
#include "chronos/io/trial_files.hpp"

namespace chronos {

inline constexpr double kSignatureDiffRateHz = 100.0;

// Velocity profile of a recorded position stream: centered differences on the
// 100 Hz cubic resampling, read back at the original sample instants.
inline Trajectory signature_velocity(const Trajectory& position) {
  const Trajectory fine = resample_cubic(position, kSignatureDiffRateHz);
  const std::vector<double> d = central_difference(fine.samples, kSignatureDiffRateHz);
  const UniformCubicSpline spline(d);
  Trajectory v{position.t0_ms, position.rate_hz, std::vector<double>(position.size())};
  for (std::size_t k = 0; k < position.size(); ++k)
    v.samples[k] = spline(static_cast<double>(k) * kSignatureDiffRateHz / position.rate_hz);
  return v;
}

inline void validate_owner(const std::string& owner) {
  static const std::regex re(R"(^[A-Za-z0-9][A-Za-z0-9_-]*$)");
  if (!std::regex_match(owner, re))
    throw ValidationError("player id '" + owner + "' must be alphanumeric (with _ or -)");
}

struct SignatureEntry {
  std::string owner;
  MotionKind kind = MotionKind::free;
  int trial = 1;
  std::string file;

  bool operator==(const SignatureEntry&) const = default;
};

// Directory of solo trial files plus a plain-text index, one entry per line:
// "<owner> <kind> <trial> <file>".
class SignatureStore {
 public:
  explicit SignatureStore(fs::path root) : root_(std::move(root)) {
    std::error_code ec;
    fs::create_directories(root_, ec);
    if (!fs::is_directory(root_)) throw IoError("cannot create signature store at " + root_.string());
    load_index();
  }

  const fs::path& root() const { return root_; }

  std::vector<SignatureEntry> list() const {
    std::lock_guard lock(mu_);
    return entries_;
  }

  // Persist a solo recording. Velocity is derived from the position stream.
  MotorSignature store(const std::string& owner, MotionKind kind, int trial, const Trajectory& position) {
    validate_owner(owner);
    require_finite(position, "signature");
    MotorSignature sig{owner, kind, trial, position, signature_velocity(position)};
    std::lock_guard lock(mu_);
    for (const auto& e : entries_)
      if (e.owner == owner && e.kind == kind && e.trial == trial)
        throw ValidationError("signature " + owner + "/" + std::string(to_string(kind)) + " trial " +
                              std::to_string(trial) + " already stored");
    const std::string file = trial_file_name(1, trial, owner + "_" + std::string(to_string(kind)));
    write_player_file(root_ / file, PlayerRecord{0, false, sig.position, sig.velocity});
    entries_.push_back({owner, kind, trial, file});
    save_index();
    return sig;
  }

  // Most recent trial unless one is named.
  MotorSignature load(const std::string& owner, MotionKind kind, std::optional<int> trial = {}) const {
    const SignatureEntry e = find(owner, kind, trial);
    const PlayerFile f = read_player_file(root_ / e.file);
    if (!f.velocity) throw ValidationError("signature file " + e.file + " has no velocity column");
    MotorSignature sig{e.owner, e.kind, e.trial, f.position, *f.velocity};
    validate_signature(sig);
    return sig;
  }

  SignatureEntry find(const std::string& owner, MotionKind kind, std::optional<int> trial = {}) const {
    std::lock_guard lock(mu_);
    const SignatureEntry* best = nullptr;
    for (const auto& e : entries_)
      if (e.owner == owner && e.kind == kind && (!trial || e.trial == *trial) && (!best || e.trial > best->trial))
        best = &e;
    if (!best)
      throw NotFoundError("no " + std::string(to_string(kind)) + " signature stored for '" + owner + "'");
    return *best;
  }

  int next_trial(const std::string& owner, MotionKind kind) const {
    std::lock_guard lock(mu_);
    int next = 1;
    for (const auto& e : entries_)
      if (e.owner == owner && e.kind == kind) next = std::max(next, e.trial + 1);
    return next;
  }

 private:
  fs::path index_path() const { return root_ / "signatures.idx"; }

  void load_index() {
    std::ifstream in(index_path());
    if (!in) return;
    std::string line;
    while (std::getline(in, line)) {
      if (trim(line).empty()) continue;
      std::istringstream row(line);
      SignatureEntry e;
      std::string kind;
      if (!(row >> e.owner >> kind >> e.trial >> e.file)) throw IoError("corrupt signature index line: " + line);
      e.kind = parse_motion_kind(kind);
      if (!fs::exists(root_ / e.file)) throw IoError("signature index points at missing file " + e.file);
      entries_.push_back(std::move(e));
    }
  }

  void save_index() const {
    const fs::path tmp = index_path().string() + ".tmp";
    {
      std::ofstream out(tmp, std::ios::trunc);
      if (!out) throw IoError("cannot write signature index");
      for (const auto& e : entries_)
        out << e.owner << ' ' << to_string(e.kind) << ' ' << e.trial << ' ' << e.file << '\n';
    }
    fs::rename(tmp, index_path());
  }

  fs::path root_;
  mutable std::mutex mu_;
  std::vector<SignatureEntry> entries_;
};

}  // namespace chronos
