#pragma once

#include <atomic>
#include <cstdint>
#include <memory>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

#include "afc/bus/core.hpp"

namespace afc::bus {

// Loopback byte-stream front end for a BusCore: one accept thread plus one
// thread per connection, so a blocked WAIT_TAKE parks only its own
// connection. Frames on one connection are processed in arrival order.
class TcpBusServer {
 public:
  explicit TcpBusServer(std::shared_ptr<BusCore> core);
  ~TcpBusServer();

  TcpBusServer(const TcpBusServer&) = delete;
  TcpBusServer& operator=(const TcpBusServer&) = delete;

  // Binds and starts serving; port 0 picks an ephemeral port. Returns the
  // bound port. Throws IoError on bind failure.
  std::uint16_t start(const std::string& host, std::uint16_t port);

  // Blocks until a SHUTDOWN frame arrives (or stop() is called).
  void wait();

  void stop();

  std::uint16_t port() const { return port_; }
  std::shared_ptr<BusCore> core() const { return core_; }

 private:
  void accept_loop();
  void serve_connection(int fd);

  std::shared_ptr<BusCore> core_;
  int listen_fd_ = -1;
  std::uint16_t port_ = 0;
  std::thread accept_thread_;
  std::mutex conn_mu_;
  std::vector<int> conn_fds_;
  std::vector<std::thread> conn_threads_;
  std::atomic<bool> stopping_{false};
  std::mutex wait_mu_;
  std::condition_variable wait_cv_;
  bool done_ = false;
};

}  // namespace afc::bus
