#include "afc/bus/server.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <cstring>

#include "afc/bus/protocol.hpp"
#include "afc/errors.hpp"

namespace afc::bus {

namespace {

bool read_exact(int fd, std::uint8_t* buf, std::size_t n) {
  std::size_t got = 0;
  while (got < n) {
    const ssize_t r = ::recv(fd, buf + got, n - got, 0);
    if (r <= 0) return false;
    got += static_cast<std::size_t>(r);
  }
  return true;
}

bool write_all(int fd, const std::uint8_t* buf, std::size_t n) {
  std::size_t sent = 0;
  while (sent < n) {
    const ssize_t r = ::send(fd, buf + sent, n - sent, MSG_NOSIGNAL);
    if (r <= 0) return false;
    sent += static_cast<std::size_t>(r);
  }
  return true;
}

}  // namespace

TcpBusServer::TcpBusServer(std::shared_ptr<BusCore> core) : core_(std::move(core)) {}

TcpBusServer::~TcpBusServer() { stop(); }

std::uint16_t TcpBusServer::start(const std::string& host, std::uint16_t port) {
  listen_fd_ = ::socket(AF_INET, SOCK_STREAM, 0);
  if (listen_fd_ < 0) throw IoError("bus: socket() failed");
  int one = 1;
  ::setsockopt(listen_fd_, SOL_SOCKET, SO_REUSEADDR, &one, sizeof(one));

  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw IoError("bus: bad host address: " + host);
  }
  if (::bind(listen_fd_, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw IoError("bus: cannot bind " + host + ":" + std::to_string(port));
  }
  if (::listen(listen_fd_, 64) != 0) {
    ::close(listen_fd_);
    listen_fd_ = -1;
    throw IoError("bus: listen() failed");
  }
  sockaddr_in bound{};
  socklen_t len = sizeof(bound);
  ::getsockname(listen_fd_, reinterpret_cast<sockaddr*>(&bound), &len);
  port_ = ntohs(bound.sin_port);

  accept_thread_ = std::thread([this] { accept_loop(); });
  return port_;
}

void TcpBusServer::accept_loop() {
  for (;;) {
    const int fd = ::accept(listen_fd_, nullptr, nullptr);
    if (fd < 0) break;  // listener closed
    int one = 1;
    ::setsockopt(fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
    std::lock_guard<std::mutex> lock(conn_mu_);
    if (stopping_.load()) {
      ::close(fd);
      break;
    }
    conn_fds_.push_back(fd);
    conn_threads_.emplace_back([this, fd] { serve_connection(fd); });
  }
}

void TcpBusServer::serve_connection(int fd) {
  std::vector<std::uint8_t> body;
  std::vector<std::uint8_t> out;
  for (;;) {
    std::uint8_t len_bytes[4];
    if (!read_exact(fd, len_bytes, 4)) break;
    const std::uint32_t len = static_cast<std::uint32_t>(len_bytes[0]) |
                              static_cast<std::uint32_t>(len_bytes[1]) << 8 |
                              static_cast<std::uint32_t>(len_bytes[2]) << 16 |
                              static_cast<std::uint32_t>(len_bytes[3]) << 24;
    if (len < 7 || len > kMaxFrameBytes) break;
    body.resize(len);
    if (!read_exact(fd, body.data(), len)) break;

    Frame request;
    Frame response;
    try {
      request = decode_frame_body(body.data(), body.size());
      switch (request.op) {
        case Opcode::put: {
          const auto result = core_->put(request.key, std::move(request.payload));
          if (result == BusCore::PutResult::ok) {
            response.op = Opcode::ok;
          } else if (result == BusCore::PutResult::duplicate) {
            response = {Opcode::err, "duplicate un-consumed key: " + request.key, {}};
          } else {
            response = {Opcode::err, "bus closed", {}};
          }
          break;
        }
        case Opcode::get: {
          auto payload = core_->get(request.key);
          response = payload ? Frame{Opcode::ok, request.key, std::move(*payload)}
                             : Frame{Opcode::miss, request.key, {}};
          break;
        }
        case Opcode::take: {
          auto payload = core_->take(request.key);
          response = payload ? Frame{Opcode::ok, request.key, std::move(*payload)}
                             : Frame{Opcode::miss, request.key, {}};
          break;
        }
        case Opcode::wait_take: {
          const std::int64_t timeout_ms =
              request.payload.empty() ? 60000
                                      : static_cast<std::int64_t>(request.payload[0]);
          auto payload = core_->wait_take(request.key, timeout_ms);
          response = payload ? Frame{Opcode::ok, request.key, std::move(*payload)}
                             : Frame{Opcode::miss, request.key, {}};
          break;
        }
        case Opcode::ping:
          response.op = Opcode::ok;
          break;
        case Opcode::shutdown: {
          response.op = Opcode::ok;
          out.clear();
          encode_frame(response, out);
          write_all(fd, out.data(), out.size());
          stop();
          return;
        }
        default:
          response = {Opcode::err, "unexpected opcode", {}};
      }
    } catch (const std::exception& e) {
      response = {Opcode::err, e.what(), {}};
    }

    out.clear();
    encode_frame(response, out);
    if (!write_all(fd, out.data(), out.size())) break;
  }
  ::close(fd);
}

void TcpBusServer::wait() {
  std::unique_lock<std::mutex> lock(wait_mu_);
  wait_cv_.wait(lock, [this] { return done_; });
}

void TcpBusServer::stop() {
  bool expected = false;
  if (!stopping_.compare_exchange_strong(expected, true)) {
    // already stopping; just make sure wait() wakes
    std::lock_guard<std::mutex> lock(wait_mu_);
    wait_cv_.notify_all();
    return;
  }
  core_->shutdown();
  if (listen_fd_ >= 0) {
    ::shutdown(listen_fd_, SHUT_RDWR);
    ::close(listen_fd_);
    listen_fd_ = -1;
  }
  {
    std::lock_guard<std::mutex> lock(conn_mu_);
    for (int fd : conn_fds_) ::shutdown(fd, SHUT_RDWR);
  }
  if (accept_thread_.joinable() && accept_thread_.get_id() != std::this_thread::get_id())
    accept_thread_.join();
  {
    std::lock_guard<std::mutex> lock(conn_mu_);
    for (auto& t : conn_threads_) {
      if (t.joinable() && t.get_id() != std::this_thread::get_id()) t.join();
      else if (t.joinable()) t.detach();
    }
    conn_threads_.clear();
  }
  {
    std::lock_guard<std::mutex> lock(wait_mu_);
    done_ = true;
    wait_cv_.notify_all();
  }
}

}  // namespace afc::bus
