#include <csignal>
#include <iostream>

#include <CLI11.hpp>

#include "chronos/net/websocket.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Session server: trials over newline-delimited JSON and WebSocket on one port"};
  std::string listen = "0.0.0.0";
  int port = 7878;
  std::string data = "chronos-data";
  double speed = 1.0;
  app.add_option("--listen", listen, "bind address")->capture_default_str();
  app.add_option("--port", port, "TCP port (0 picks a free one)")->capture_default_str()->check(CLI::Range(0, 65535));
  app.add_option("--data", data, "directory for trial files and the signature store")->capture_default_str();
  app.add_option("--speed", speed, "tick-rate multiplier (testing only)")->capture_default_str();
  CLI11_PARSE(app, argc, argv);

  // Block the stop signals before any thread starts so only sigwait sees them.
  sigset_t stop;
  sigemptyset(&stop);
  sigaddset(&stop, SIGINT);
  sigaddset(&stop, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &stop, nullptr);

  try {
    chronos::Hub hub({data, speed});
    auto listener = chronos::net::serve_hub(hub, listen, port);
    std::cout << "listening on " << listen << ':' << listener->port() << ", data in " << data << std::endl;
    int sig = 0;
    sigwait(&stop, &sig);
    std::cout << "shutting down" << std::endl;
    listener->stop();
  } catch (const chronos::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
