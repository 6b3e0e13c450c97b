#pragma once

#include <cmath>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "chronos/net/websocket.hpp"

namespace chronos::scripted {

// A player over a real socket: joins, answers every frame with a position and
// logs everything the server sent.
struct ClientLog {
  std::vector<std::string> lines;
  std::vector<wire::Frame> frames;
  std::string end_reason;
  std::string join_error;
};

inline ClientLog play(const std::shared_ptr<Connection>& conn, const std::string& session, int index,
                      double freq_hz = 0.25, int quit_after_frames = -1) {
  ClientLog log;
  conn->send(wire::encode(wire::Join{session, index}));
  while (auto line = conn->read_message()) {
    log.lines.push_back(*line);
    const auto m = wire::parse_server(*line);
    if (m.t == "error") {
      log.join_error = m.body.at("msg").get<std::string>();
      break;
    }
    if (m.t == "frame") {
      log.frames.push_back(wire::decode_frame(m.body));
      if (quit_after_frames >= 0 && static_cast<int>(log.frames.size()) == quit_after_frames) {
        conn->send(wire::encode(wire::Quit{}));
        continue;
      }
      const double t = static_cast<double>(log.frames.back().ms) / 1000.0;
      conn->send(wire::encode(wire::Pos{static_cast<double>(log.frames.back().ms),
                                        5.0 + 2.0 * std::sin(2.0 * std::numbers::pi * freq_hz * t)}));
    }
    if (m.t == "end") {
      log.end_reason = m.body.at("reason").get<std::string>();
      break;
    }
  }
  conn->close();
  return log;
}

}  // namespace chronos::scripted
