#pragma once

#include <openssl/evp.h>
#include <openssl/rand.h>
#include <openssl/sha.h>

#include <algorithm>
#include <cctype>

#include "chronos/net/socket.hpp"

namespace chronos::net {

// Minimal RFC 6455 server and client: text frames carrying the same JSON
// payloads as the line protocol, one message per frame.

namespace ws {

inline constexpr std::string_view kGuid = "258EAFA5-E914-47DA-95CA-C5AB0DC85B11";

inline std::string accept_key(std::string_view key) {
  const std::string in = std::string(key) + std::string(kGuid);
  unsigned char digest[SHA_DIGEST_LENGTH];
  SHA1(reinterpret_cast<const unsigned char*>(in.data()), in.size(), digest);
  unsigned char out[4 * ((SHA_DIGEST_LENGTH + 2) / 3) + 1];
  const int n = EVP_EncodeBlock(out, digest, SHA_DIGEST_LENGTH);
  return std::string(reinterpret_cast<char*>(out), static_cast<std::size_t>(n));
}

inline std::string lower(std::string_view s) {
  std::string out(s);
  for (auto& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

// Header value by case-insensitive name from a raw HTTP head.
inline std::optional<std::string> header(std::string_view head, std::string_view name) {
  std::size_t pos = head.find("\r\n");
  while (pos != std::string_view::npos && pos + 2 < head.size()) {
    const std::size_t start = pos + 2;
    const std::size_t end = head.find("\r\n", start);
    const std::string_view line = head.substr(start, end == std::string_view::npos ? head.npos : end - start);
    const auto colon = line.find(':');
    if (colon != std::string_view::npos && lower(trim(line.substr(0, colon))) == lower(name))
      return std::string(trim(line.substr(colon + 1)));
    pos = end;
  }
  return std::nullopt;
}

enum Opcode : unsigned char { kContinuation = 0, kText = 1, kBinary = 2, kClose = 8, kPing = 9, kPong = 10 };

inline std::string encode_frame(Opcode op, std::string_view payload, bool mask) {
  std::string f;
  f.push_back(static_cast<char>(0x80 | op));
  const unsigned char m = mask ? 0x80 : 0;
  const std::size_t n = payload.size();
  if (n < 126) {
    f.push_back(static_cast<char>(m | n));
  } else if (n <= 0xffff) {
    f.push_back(static_cast<char>(m | 126));
    f.push_back(static_cast<char>(n >> 8));
    f.push_back(static_cast<char>(n & 0xff));
  } else {
    f.push_back(static_cast<char>(m | 127));
    for (int s = 56; s >= 0; s -= 8) f.push_back(static_cast<char>((static_cast<std::uint64_t>(n) >> s) & 0xff));
  }
  if (!mask) return f.append(payload);
  unsigned char key[4];
  RAND_bytes(key, 4);
  f.append(reinterpret_cast<char*>(key), 4);
  for (std::size_t i = 0; i < n; ++i) f.push_back(static_cast<char>(payload[i] ^ key[i % 4]));
  return f;
}

}  // namespace ws

class WebSocketConnection : public Connection {
 public:
  // is_client: frames we send are masked and frames we receive are not.
  WebSocketConnection(std::shared_ptr<Socket> s, bool is_client) : sock_(std::move(s)), client_(is_client) {}

  std::optional<std::string> read_message() override {
    std::string message;
    while (true) {
      unsigned char op = 0;
      bool fin = false;
      std::string payload;
      if (!read_frame(op, fin, payload)) return std::nullopt;
      if (op == ws::kPing) {
        sock_->write_all(ws::encode_frame(ws::kPong, payload, client_));
        continue;
      }
      if (op == ws::kPong) continue;
      if (op == ws::kClose) {
        sock_->write_all(ws::encode_frame(ws::kClose, payload.substr(0, 2), client_));
        return std::nullopt;
      }
      message += payload;
      if (message.size() > kMaxMessageBytes) return std::nullopt;
      if (fin) return message;
    }
  }

  bool send(const std::string& payload) override {
    return sock_->write_all(ws::encode_frame(ws::kText, payload, client_));
  }

  void close() override {
    sock_->write_all(ws::encode_frame(ws::kClose, "\x03\xe8", client_));
    sock_->shutdown();
  }

 private:
  bool need(std::size_t n) {
    while (sock_->pending.size() < n)
      if (!sock_->read_some(sock_->pending)) return false;
    return true;
  }

  bool read_frame(unsigned char& op, bool& fin, std::string& payload) {
    auto& buf = sock_->pending;
    if (!need(2)) return false;
    const auto b0 = static_cast<unsigned char>(buf[0]), b1 = static_cast<unsigned char>(buf[1]);
    fin = b0 & 0x80;
    op = b0 & 0x0f;
    const bool masked = b1 & 0x80;
    if (masked == client_) return false;  // servers must not mask, clients must
    std::uint64_t len = b1 & 0x7f;
    std::size_t head = 2;
    if (len == 126 || len == 127) {
      const std::size_t ext = len == 126 ? 2 : 8;
      if (!need(head + ext)) return false;
      len = 0;
      for (std::size_t i = 0; i < ext; ++i) len = (len << 8) | static_cast<unsigned char>(buf[head + i]);
      head += ext;
    }
    if (len > kMaxMessageBytes) return false;
    unsigned char key[4] = {0, 0, 0, 0};
    if (masked) {
      if (!need(head + 4)) return false;
      std::copy_n(buf.begin() + static_cast<std::ptrdiff_t>(head), 4, key);
      head += 4;
    }
    if (!need(head + len)) return false;
    payload = buf.substr(head, len);
    if (masked)
      for (std::size_t i = 0; i < payload.size(); ++i) payload[i] = static_cast<char>(payload[i] ^ key[i % 4]);
    buf.erase(0, head + len);
    return true;
  }

  std::shared_ptr<Socket> sock_;
  bool client_;
};

// Server side: read the HTTP upgrade request (already partly buffered) and
// answer it. Throws on anything that is not a WebSocket handshake.
inline std::shared_ptr<Connection> accept_websocket(const std::shared_ptr<Socket>& sock) {
  auto& buf = sock->pending;
  std::size_t end;
  while ((end = buf.find("\r\n\r\n")) == std::string::npos) {
    if (buf.size() > 16384 || !sock->read_some(buf)) throw ValidationError("incomplete HTTP request");
  }
  const std::string head = buf.substr(0, end + 2);
  buf.erase(0, end + 4);
  const auto upgrade = ws::header(head, "Upgrade");
  const auto key = ws::header(head, "Sec-WebSocket-Key");
  if (!upgrade || ws::lower(*upgrade) != "websocket" || !key) {
    sock->write_all("HTTP/1.1 400 Bad Request\r\nContent-Length: 0\r\nConnection: close\r\n\r\n");
    throw ValidationError("not a WebSocket upgrade");
  }
  sock->write_all("HTTP/1.1 101 Switching Protocols\r\nUpgrade: websocket\r\nConnection: Upgrade\r\n"
                  "Sec-WebSocket-Accept: " + ws::accept_key(*key) + "\r\n\r\n");
  return std::make_shared<WebSocketConnection>(sock, false);
}

inline std::shared_ptr<Connection> connect_websocket(const std::string& host, int port, const std::string& path = "/") {
  auto sock = connect_tcp(host, port);
  unsigned char raw[16];
  RAND_bytes(raw, 16);
  unsigned char key[25];
  EVP_EncodeBlock(key, raw, 16);
  const std::string k(reinterpret_cast<char*>(key), 24);
  sock->write_all("GET " + path + " HTTP/1.1\r\nHost: " + host + ":" + std::to_string(port) +
                  "\r\nUpgrade: websocket\r\nConnection: Upgrade\r\nSec-WebSocket-Key: " + k +
                  "\r\nSec-WebSocket-Version: 13\r\n\r\n");
  auto& buf = sock->pending;
  std::size_t end;
  while ((end = buf.find("\r\n\r\n")) == std::string::npos)
    if (!sock->read_some(buf)) throw UnreachableError("WebSocket handshake failed");
  const std::string head = buf.substr(0, end + 2);
  buf.erase(0, end + 4);
  if (head.rfind("HTTP/1.1 101", 0) != 0 || ws::header(head, "Sec-WebSocket-Accept") != ws::accept_key(k))
    throw UnreachableError("WebSocket handshake rejected");
  return std::make_shared<WebSocketConnection>(sock, true);
}

// Serve a hub on one port: connections opening with an HTTP request are
// upgraded to WebSocket, everything else speaks newline-delimited JSON.
inline std::unique_ptr<Listener> serve_hub(Hub& hub, const std::string& host, int port) {
  return std::make_unique<Listener>(host, port, [&hub](std::shared_ptr<Socket> sock) {
    if (!sock->read_some(sock->pending)) return;
    std::shared_ptr<Connection> conn;
    if (sock->pending.rfind("GET ", 0) == 0 || sock->pending == "G" || sock->pending == "GE" || sock->pending == "GET")
      conn = accept_websocket(sock);
    else
      conn = std::make_shared<LineConnection>(sock);
    hub.serve(conn);
  });
}

}  // namespace chronos::net
