#pragma once

#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "chronos/core/types.hpp"
#include "chronos/error.hpp"

namespace chronos {

// Directed visibility relation between players. sees(i, j) means player i
// is shown player j's motion. Indices are 0-based; the wire and file layers
// translate to the 1-based numbering shown to participants.
class Topology {
 public:
  using Matrix = std::vector<std::vector<bool>>;

  Topology() = default;

  std::size_t size() const { return adjacency_.size(); }
  bool sees(std::size_t i, std::size_t j) const { return adjacency_.at(i).at(j); }
  const Matrix& adjacency() const { return adjacency_; }

  bool undirected() const {
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j)
        if (adjacency_[i][j] != adjacency_[j][i]) return false;
    return true;
  }

  // Connected in either direction.
  bool linked(std::size_t i, std::size_t j) const { return sees(i, j) || sees(j, i); }

  std::vector<std::size_t> neighbors_of(std::size_t i) const {
    if (i >= size())
      throw ValidationError("player index " + std::to_string(i) + " out of range for " +
                            std::to_string(size()) + " players");
    std::vector<std::size_t> out;
    for (std::size_t j = 0; j < size(); ++j)
      if (adjacency_[i][j]) out.push_back(j);
    return out;
  }

  bool operator==(const Topology&) const = default;

  friend Topology validate_topology(const Matrix& raw, TrialType type);

 private:
  explicit Topology(Matrix m) : adjacency_(std::move(m)) {}
  Matrix adjacency_;
};

inline Topology validate_topology(const Topology::Matrix& raw, TrialType type) {
  const std::size_t n = raw.size();
  for (const auto& row : raw)
    if (row.size() != n) throw ValidationError("topology matrix is not square");

  switch (type) {
    case TrialType::solo:
      if (n != 1) throw ValidationError("solo trials have exactly 1 player");
      break;
    case TrialType::dyadic_hp_hp:
    case TrialType::dyadic_hp_vp:
      if (n != 2) throw ValidationError("dyadic trials have exactly 2 players");
      break;
    case TrialType::group:
      if (n < kMinGroupPlayers || n > kMaxGroupPlayers)
        throw ValidationError("group trials need between 3 and 7 players, got " +
                              std::to_string(n));
      break;
  }

  for (std::size_t i = 0; i < n; ++i)
    if (raw[i][i])
      throw ValidationError("self-edge at (" + std::to_string(i + 1) + "," +
                            std::to_string(i + 1) + "): the diagonal must be 0");

  if (type == TrialType::group) {
    for (std::size_t i = 0; i < n; ++i) {
      bool any = false;
      for (std::size_t j = 0; j < n && !any; ++j) any = raw[i][j] || raw[j][i];
      if (!any)
        throw ValidationError("player " + std::to_string(i + 1) +
                              " is isolated (neither sees nor is seen)");
    }
  }
  return Topology(raw);
}

// Whitespace-separated 0/1 digits, one row per line.
inline Topology::Matrix parse_topology_matrix(std::istream& in) {
  Topology::Matrix m;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream row(line);
    std::vector<bool> r;
    std::string tok;
    while (row >> tok) {
      if (tok == "0") r.push_back(false);
      else if (tok == "1") r.push_back(true);
      else throw ValidationError("topology entries must be 0 or 1, got '" + tok + "'");
    }
    m.push_back(std::move(r));
  }
  return m;
}

inline Topology::Matrix parse_topology_matrix(const std::string& text) {
  std::istringstream in(text);
  return parse_topology_matrix(in);
}

inline void write_topology(std::ostream& out, const Topology& t) {
  for (std::size_t i = 0; i < t.size(); ++i) {
    for (std::size_t j = 0; j < t.size(); ++j) out << (j ? " " : "") << (t.sees(i, j) ? 1 : 0);
    out << '\n';
  }
}

namespace topologies {

// Builders for the standard interaction patterns (0-based indices).

inline Topology::Matrix empty(std::size_t n) { return Topology::Matrix(n, std::vector<bool>(n, false)); }

inline Topology::Matrix complete(std::size_t n) {
  auto m = empty(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) m[i][j] = i != j;
  return m;
}

inline Topology::Matrix ring(std::size_t n) {
  auto m = empty(n);
  for (std::size_t i = 0; i < n; ++i) {
    m[i][(i + 1) % n] = true;
    m[i][(i + n - 1) % n] = true;
  }
  return m;
}

inline Topology::Matrix path(std::size_t n) {
  auto m = empty(n);
  for (std::size_t i = 0; i + 1 < n; ++i) m[i][i + 1] = m[i + 1][i] = true;
  return m;
}

inline Topology::Matrix star(std::size_t n, std::size_t center) {
  auto m = empty(n);
  for (std::size_t i = 0; i < n; ++i)
    if (i != center) m[i][center] = m[center][i] = true;
  return m;
}

// Directed variants: each player sees only its successor (ring, path) or
// every non-center player sees only the center (star).
inline Topology::Matrix directed_ring(std::size_t n) {
  auto m = empty(n);
  for (std::size_t i = 0; i < n; ++i) m[i][(i + 1) % n] = true;
  return m;
}

inline Topology::Matrix directed_path(std::size_t n) {
  auto m = empty(n);
  for (std::size_t i = 0; i + 1 < n; ++i) m[i + 1][i] = true;
  return m;
}

inline Topology::Matrix directed_star(std::size_t n, std::size_t center) {
  auto m = empty(n);
  for (std::size_t i = 0; i < n; ++i)
    if (i != center) m[i][center] = true;
  return m;
}

inline Topology::Matrix directed_complete(std::size_t n) {
  // Acyclic tournament: i sees every j < i.
  auto m = empty(n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) m[i][j] = true;
  return m;
}

}  // namespace topologies

}  // namespace chronos
