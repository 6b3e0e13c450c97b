#pragma once

#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "chronos/core/types.hpp"
#include "chronos/error.hpp"

namespace chronos::wire {

// Newline-delimited JSON, one object per line. Player indices on the wire are
// the 1-based numbers participants type in.
//
// Player messages:
//   {"t":"join","session":S,"index":I}  {"t":"pos","ms":T,"x":X}  {"t":"quit"}
//   {"t":"joined","index":I,"role":R}  {"t":"countdown","s":K}
//   {"t":"frame","ms":T,"self":X,"peers":{"J":XJ,...}}  {"t":"end","reason":"complete|abort"}
// Administration (same stream, separate connection):
//   {"t":"create","config":TEXT}      -> {"t":"created","session":S,"defaults":[...]}
//   {"t":"wait","session":S}          -> {"t":"finished","session":S,"partial":B,"files":[...]}
//   {"t":"signatures"}                -> {"t":"signatures","entries":[{"owner","kind","trial","file"}...]}
//   {"t":"signature","owner":O,"kind":K[,"trial":N]} -> {"t":"signature",...,"ms":[...],"x":[...],"v":[...]}
// Any request may be answered with {"t":"error","msg":M}.

using json = nlohmann::json;
using ordered = nlohmann::ordered_json;

struct Join {
  std::string session;
  int index = 0;
};
struct Pos {
  double ms = 0.0;
  double x = 0.0;
};
struct Quit {};
struct Create {
  std::string config;
};
struct Wait {
  std::string session;
};
struct ListSignatures {};
struct GetSignature {
  std::string owner;
  MotionKind kind = MotionKind::free;
  std::optional<int> trial;
};

using ClientMessage = std::variant<Join, Pos, Quit, Create, Wait, ListSignatures, GetSignature>;

namespace detail {

inline const json& field(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end()) throw ValidationError(std::string("message lacks \"") + key + "\"");
  return *it;
}

inline double number(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number()) throw ValidationError(std::string("\"") + key + "\" must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ValidationError(std::string("\"") + key + "\" must be finite");
  return d;
}

inline int integer(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer()) throw ValidationError(std::string("\"") + key + "\" must be an integer");
  return v.get<int>();
}

inline std::string text(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_string()) throw ValidationError(std::string("\"") + key + "\" must be a string");
  return v.get<std::string>();
}

// Session ids are strings; a bare integer is accepted and rendered in decimal.
inline std::string session_id(const json& j) {
  const json& v = field(j, "session");
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ValidationError("\"session\" must be a string or integer");
}

inline std::string dump(const ordered& j) { return j.dump(-1, ' ', false, json::error_handler_t::replace); }

}  // namespace detail

inline ClientMessage parse_client(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("message is not a JSON object");
  const std::string t = detail::text(j, "t");
  if (t == "pos") return Pos{detail::number(j, "ms"), detail::number(j, "x")};
  if (t == "join") return Join{detail::session_id(j), detail::integer(j, "index")};
  if (t == "quit") return Quit{};
  if (t == "create") return Create{detail::text(j, "config")};
  if (t == "wait") return Wait{detail::session_id(j)};
  if (t == "signatures") return ListSignatures{};
  if (t == "signature") {
    GetSignature g{detail::text(j, "owner"), parse_motion_kind(detail::text(j, "kind")), std::nullopt};
    if (j.contains("trial")) g.trial = detail::integer(j, "trial");
    return g;
  }
  throw ValidationError("unknown message type \"" + t + "\"");
}

inline std::string encode(const Join& m) {
  return detail::dump(ordered{{"t", "join"}, {"session", m.session}, {"index", m.index}});
}
inline std::string encode(const Pos& m) { return detail::dump(ordered{{"t", "pos"}, {"ms", m.ms}, {"x", m.x}}); }
inline std::string encode(const Quit&) { return detail::dump(ordered{{"t", "quit"}}); }
inline std::string encode(const Create& m) { return detail::dump(ordered{{"t", "create"}, {"config", m.config}}); }
inline std::string encode(const Wait& m) { return detail::dump(ordered{{"t", "wait"}, {"session", m.session}}); }
inline std::string encode(const ListSignatures&) { return detail::dump(ordered{{"t", "signatures"}}); }
inline std::string encode(const GetSignature& m) {
  ordered j{{"t", "signature"}, {"owner", m.owner}, {"kind", to_string(m.kind)}};
  if (m.trial) j["trial"] = *m.trial;
  return detail::dump(j);
}

// Server -> player.

inline std::string joined(int index, Role role) {
  return detail::dump(ordered{{"t", "joined"}, {"index", index}, {"role", to_string(role)}});
}

inline std::string countdown(int seconds) { return detail::dump(ordered{{"t", "countdown"}, {"s", seconds}}); }

// peers: 1-based index -> position.
inline std::string frame(long long ms, double self, const std::map<int, double>& peers) {
  ordered p = ordered::object();
  for (const auto& [j, x] : peers) p[std::to_string(j)] = x;
  return detail::dump(ordered{{"t", "frame"}, {"ms", ms}, {"self", self}, {"peers", std::move(p)}});
}

inline std::string end(bool complete) {
  return detail::dump(ordered{{"t", "end"}, {"reason", complete ? "complete" : "abort"}});
}

inline std::string error(const std::string& msg) { return detail::dump(ordered{{"t", "error"}, {"msg", msg}}); }

// Server -> admin.

inline std::string created(const std::string& session, const std::vector<std::string>& defaults) {
  return detail::dump(ordered{{"t", "created"}, {"session", session}, {"defaults", defaults}});
}

inline std::string finished(const std::string& session, bool partial, const std::vector<std::string>& files) {
  return detail::dump(ordered{{"t", "finished"}, {"session", session}, {"partial", partial}, {"files", files}});
}

// Decoded server message for clients and tests: type tag plus the raw object.
struct ServerMessage {
  std::string t;
  json body;
};

inline ServerMessage parse_server(std::string_view line) {
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded() || !j.is_object()) throw ValidationError("server message is not a JSON object");
  return {detail::text(j, "t"), std::move(j)};
}

struct Frame {
  long long ms = 0;
  double self = 0.0;
  std::map<int, double> peers;  // 1-based
};

inline Frame decode_frame(const json& j) {
  Frame f;
  f.ms = j.at("ms").get<long long>();
  f.self = j.at("self").get<double>();
  for (const auto& [k, v] : j.at("peers").items()) f.peers[std::stoi(k)] = v.get<double>();
  return f;
}

}  // namespace chronos::wire
