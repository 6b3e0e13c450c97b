#pragma once

#include <arpa/inet.h>
#include <netdb.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <poll.h>
#include <sys/socket.h>
#include <unistd.h>

#include <atomic>
#include <cerrno>
#include <cstring>
#include <functional>
#include <list>
#include <memory>
#include <mutex>
#include <string>
#include <thread>

#include "chronos/error.hpp"
#include "chronos/server/hub.hpp"

namespace chronos::net {

class UnreachableError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::size_t kMaxMessageBytes = 4u << 20;

// Owned socket with buffered reads. Writes are serialized by a mutex so the
// session loop and the connection thread can both send.
class Socket {
 public:
  explicit Socket(int fd) : fd_(fd) {
    int one = 1;
    ::setsockopt(fd_, IPPROTO_TCP, TCP_NODELAY, &one, sizeof one);
  }
  ~Socket() {
    if (fd_ >= 0) ::close(fd_);
  }
  Socket(const Socket&) = delete;
  Socket& operator=(const Socket&) = delete;

  int fd() const { return fd_; }

  // Appends whatever arrives to buf; false on EOF or error.
  bool read_some(std::string& buf) {
    char tmp[8192];
    while (true) {
      const ssize_t n = ::recv(fd_, tmp, sizeof tmp, 0);
      if (n > 0) {
        buf.append(tmp, static_cast<std::size_t>(n));
        return true;
      }
      if (n < 0 && errno == EINTR) continue;
      return false;
    }
  }

  bool write_all(std::string_view data) {
    std::lock_guard lock(write_mu_);
    while (!data.empty()) {
      const ssize_t n = ::send(fd_, data.data(), data.size(), MSG_NOSIGNAL);
      if (n < 0) {
        if (errno == EINTR) continue;
        return false;
      }
      data.remove_prefix(static_cast<std::size_t>(n));
    }
    return true;
  }

  void shutdown() { ::shutdown(fd_, SHUT_RDWR); }

  std::string pending;  // bytes read but not yet consumed

 private:
  int fd_;
  std::mutex write_mu_;
};

// Newline-delimited JSON.
class LineConnection : public Connection {
 public:
  explicit LineConnection(std::shared_ptr<Socket> s) : sock_(std::move(s)) {}

  std::optional<std::string> read_message() override {
    auto& buf = sock_->pending;
    while (true) {
      const auto nl = buf.find('\n');
      if (nl != std::string::npos) {
        std::string line = buf.substr(0, nl);
        buf.erase(0, nl + 1);
        if (!line.empty() && line.back() == '\r') line.pop_back();
        return line;
      }
      if (buf.size() > kMaxMessageBytes || !sock_->read_some(buf)) return std::nullopt;
    }
  }

  bool send(const std::string& payload) override { return sock_->write_all(payload + "\n"); }
  void close() override { sock_->shutdown(); }

 private:
  std::shared_ptr<Socket> sock_;
};

inline std::shared_ptr<Socket> connect_tcp(const std::string& host, int port) {
  addrinfo hints{};
  hints.ai_family = AF_UNSPEC;
  hints.ai_socktype = SOCK_STREAM;
  addrinfo* res = nullptr;
  if (::getaddrinfo(host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0)
    throw UnreachableError("cannot resolve " + host);
  std::shared_ptr<Socket> out;
  for (addrinfo* a = res; a && !out; a = a->ai_next) {
    const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
    if (fd < 0) continue;
    if (::connect(fd, a->ai_addr, a->ai_addrlen) == 0) out = std::make_shared<Socket>(fd);
    else ::close(fd);
  }
  ::freeaddrinfo(res);
  if (!out) throw UnreachableError("cannot connect to " + host + ":" + std::to_string(port));
  return out;
}

// Accepts connections and runs a handler for each on its own thread.
class Listener {
 public:
  using Handler = std::function<void(std::shared_ptr<Socket>)>;

  Listener(const std::string& host, int port, Handler handler) : handler_(std::move(handler)) {
    addrinfo hints{};
    hints.ai_family = AF_UNSPEC;
    hints.ai_socktype = SOCK_STREAM;
    hints.ai_flags = AI_PASSIVE;
    addrinfo* res = nullptr;
    if (::getaddrinfo(host.empty() ? nullptr : host.c_str(), std::to_string(port).c_str(), &hints, &res) != 0)
      throw IoError("cannot resolve listen address " + host);
    for (addrinfo* a = res; a && fd_ < 0; a = a->ai_next) {
      const int fd = ::socket(a->ai_family, a->ai_socktype, a->ai_protocol);
      if (fd < 0) continue;
      int one = 1;
      ::setsockopt(fd, SOL_SOCKET, SO_REUSEADDR, &one, sizeof one);
      if (::bind(fd, a->ai_addr, a->ai_addrlen) == 0 && ::listen(fd, 64) == 0) fd_ = fd;
      else ::close(fd);
    }
    ::freeaddrinfo(res);
    if (fd_ < 0) throw IoError("cannot listen on " + host + ":" + std::to_string(port) + ": " + std::strerror(errno));

    sockaddr_storage addr{};
    socklen_t len = sizeof addr;
    ::getsockname(fd_, reinterpret_cast<sockaddr*>(&addr), &len);
    port_ = addr.ss_family == AF_INET6 ? ntohs(reinterpret_cast<sockaddr_in6*>(&addr)->sin6_port)
                                       : ntohs(reinterpret_cast<sockaddr_in*>(&addr)->sin_port);
    thread_ = std::thread([this] { accept_loop(); });
  }

  ~Listener() { stop(); }

  int port() const { return port_; }

  void stop() {
    if (stopping_.exchange(true)) return;
    ::shutdown(fd_, SHUT_RDWR);
    if (thread_.joinable()) thread_.join();
    ::close(fd_);
    std::list<Worker> workers;
    {
      std::lock_guard lock(mu_);
      for (auto& w : workers_) w.sock->shutdown();
      workers.swap(workers_);
    }
    for (auto& w : workers)
      if (w.thread.joinable()) w.thread.join();
  }

 private:
  struct Worker {
    std::shared_ptr<Socket> sock;
    std::thread thread;
  };

  void accept_loop() {
    while (!stopping_) {
      pollfd p{fd_, POLLIN, 0};
      if (::poll(&p, 1, 200) <= 0) continue;
      const int fd = ::accept(fd_, nullptr, nullptr);
      if (fd < 0) continue;
      auto sock = std::make_shared<Socket>(fd);
      std::lock_guard lock(mu_);
      if (stopping_) return;
      workers_.push_back({sock, {}});
      workers_.back().thread = std::thread([this, sock] {
        try {
          handler_(sock);
        } catch (const std::exception&) {
        }
        sock->shutdown();
      });
    }
  }

  Handler handler_;
  int fd_ = -1;
  int port_ = 0;
  std::atomic<bool> stopping_{false};
  std::thread thread_;
  std::mutex mu_;
  std::list<Worker> workers_;
};

}  // namespace chronos::net
