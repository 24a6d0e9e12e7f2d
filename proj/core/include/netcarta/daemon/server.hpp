#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <string_view>

#include "netcarta/daemon/store.hpp"

namespace netcarta::daemon {

struct BindAddress {
  std::string host = "127.0.0.1";
  int port = 9090;

  // "host:port" or ":port". Throws ConfigError.
  static BindAddress parse(std::string_view text);
  std::string to_string() const;
};

struct ServerOptions {
  std::chrono::milliseconds long_poll_timeout{25000};
};

// JSON/REST front end over an ExperimentStore.
//
//   GET/PUT  /experiment            (PUT accepts ?generation=N)
//   GET      /nodes[?q=key%3Dvalue], GET/PUT/DELETE /nodes/{id}, POST /nodes
//   GET/POST /networks, GET/DELETE /networks/{id}
//   GET/PUT  /config
//   POST     /observations, /routers, /traceroutes
//   GET      /graph[?since=N]
//   POST     /save, /load           ({"path": ...})
class Server {
 public:
  explicit Server(ExperimentStore& store, ServerOptions options = {});
  ~Server();
  Server(const Server&) = delete;
  Server& operator=(const Server&) = delete;

  // Throws Error when the address cannot be bound. Port 0 picks a free port.
  int bind(const BindAddress& address);
  // Serves until stop() is called.
  void run();
  void stop();
  bool running() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace netcarta::daemon
