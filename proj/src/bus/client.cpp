#include "afc/bus/client.hpp"

#include <arpa/inet.h>
#include <netinet/in.h>
#include <netinet/tcp.h>
#include <sys/socket.h>
#include <unistd.h>

#include <charconv>
#include <chrono>
#include <cstring>
#include <thread>

#include "afc/bus/protocol.hpp"
#include "afc/errors.hpp"

namespace afc::bus {

void InprocClient::put(const std::string& key, const std::vector<double>& payload) {
  const auto result = core_->put(key, payload);
  if (result == BusCore::PutResult::duplicate)
    throw ProtocolError("duplicate un-consumed key: " + key);
  if (result == BusCore::PutResult::closed) throw ProtocolError("bus closed");
}

std::optional<std::vector<double>> InprocClient::get(const std::string& key) {
  return core_->get(key);
}

std::optional<std::vector<double>> InprocClient::take(const std::string& key) {
  return core_->take(key);
}

std::optional<std::vector<double>> InprocClient::wait_take(const std::string& key,
                                                           std::int64_t timeout_ms) {
  return core_->wait_take(key, timeout_ms);
}

struct TcpClient::Ctx {
  int fd = -1;
  std::vector<std::uint8_t> out;
  std::vector<std::uint8_t> body;

  ~Ctx() {
    if (fd >= 0) ::close(fd);
  }

  void set_recv_timeout(std::int64_t ms) {
    timeval tv{};
    tv.tv_sec = ms / 1000;
    tv.tv_usec = (ms % 1000) * 1000;
    ::setsockopt(fd, SOL_SOCKET, SO_RCVTIMEO, &tv, sizeof(tv));
  }

  bool read_exact(std::uint8_t* buf, std::size_t n) {
    std::size_t got = 0;
    while (got < n) {
      const ssize_t r = ::recv(fd, buf + got, n - got, 0);
      if (r <= 0) return false;
      got += static_cast<std::size_t>(r);
    }
    return true;
  }

  Frame request(const Frame& f, std::int64_t recv_timeout_ms) {
    out.clear();
    encode_frame(f, out);
    std::size_t sent = 0;
    while (sent < out.size()) {
      const ssize_t r = ::send(fd, out.data() + sent, out.size() - sent, MSG_NOSIGNAL);
      if (r <= 0) throw ProtocolError("bus connection lost (send)");
      sent += static_cast<std::size_t>(r);
    }
    set_recv_timeout(recv_timeout_ms);
    std::uint8_t len_bytes[4];
    if (!read_exact(len_bytes, 4)) throw ProtocolError("bus connection lost (recv)");
    const std::uint32_t len = static_cast<std::uint32_t>(len_bytes[0]) |
                              static_cast<std::uint32_t>(len_bytes[1]) << 8 |
                              static_cast<std::uint32_t>(len_bytes[2]) << 16 |
                              static_cast<std::uint32_t>(len_bytes[3]) << 24;
    if (len < 7 || len > kMaxFrameBytes) throw ProtocolError("bus sent malformed frame");
    body.resize(len);
    if (!read_exact(body.data(), len)) throw ProtocolError("bus connection lost (recv body)");
    return decode_frame_body(body.data(), body.size());
  }
};

TcpClient::TcpClient(const std::string& host, std::uint16_t port,
                     std::int64_t connect_timeout_ms)
    : ctx_(std::make_unique<Ctx>()) {
  sockaddr_in addr{};
  addr.sin_family = AF_INET;
  addr.sin_port = htons(port);
  if (::inet_pton(AF_INET, host.c_str(), &addr.sin_addr) != 1)
    throw IoError("bus client: bad host address: " + host);

  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(connect_timeout_ms);
  for (;;) {
    ctx_->fd = ::socket(AF_INET, SOCK_STREAM, 0);
    if (ctx_->fd < 0) throw IoError("bus client: socket() failed");
    if (::connect(ctx_->fd, reinterpret_cast<sockaddr*>(&addr), sizeof(addr)) == 0) break;
    ::close(ctx_->fd);
    ctx_->fd = -1;
    if (std::chrono::steady_clock::now() >= deadline)
      throw IoError("bus client: cannot connect to " + host + ":" + std::to_string(port));
    std::this_thread::sleep_for(std::chrono::milliseconds(20));
  }
  int one = 1;
  ::setsockopt(ctx_->fd, IPPROTO_TCP, TCP_NODELAY, &one, sizeof(one));
}

TcpClient::~TcpClient() = default;

namespace {
constexpr std::int64_t kRpcTimeoutMs = 30000;
}

void TcpClient::put(const std::string& key, const std::vector<double>& payload) {
  const Frame resp = ctx_->request({Opcode::put, key, payload}, kRpcTimeoutMs);
  if (resp.op == Opcode::ok) return;
  throw ProtocolError(resp.op == Opcode::err ? resp.key : "unexpected bus response to PUT");
}

std::optional<std::vector<double>> TcpClient::get(const std::string& key) {
  Frame resp = ctx_->request({Opcode::get, key, {}}, kRpcTimeoutMs);
  if (resp.op == Opcode::ok) return std::move(resp.payload);
  if (resp.op == Opcode::miss) return std::nullopt;
  throw ProtocolError(resp.op == Opcode::err ? resp.key : "unexpected bus response to GET");
}

std::optional<std::vector<double>> TcpClient::take(const std::string& key) {
  Frame resp = ctx_->request({Opcode::take, key, {}}, kRpcTimeoutMs);
  if (resp.op == Opcode::ok) return std::move(resp.payload);
  if (resp.op == Opcode::miss) return std::nullopt;
  throw ProtocolError(resp.op == Opcode::err ? resp.key : "unexpected bus response to TAKE");
}

std::optional<std::vector<double>> TcpClient::wait_take(const std::string& key,
                                                        std::int64_t timeout_ms) {
  Frame resp = ctx_->request({Opcode::wait_take, key, {static_cast<double>(timeout_ms)}},
                             timeout_ms + kRpcTimeoutMs);
  if (resp.op == Opcode::ok) return std::move(resp.payload);
  if (resp.op == Opcode::miss) return std::nullopt;
  throw ProtocolError(resp.op == Opcode::err ? resp.key
                                             : "unexpected bus response to WAIT_TAKE");
}

bool TcpClient::ping() {
  try {
    return ctx_->request({Opcode::ping, "", {}}, kRpcTimeoutMs).op == Opcode::ok;
  } catch (const ProtocolError&) {
    return false;
  }
}

void TcpClient::shutdown_server() {
  try {
    ctx_->request({Opcode::shutdown, "", {}}, kRpcTimeoutMs);
  } catch (const ProtocolError&) {
    // server may close the connection while acknowledging
  }
}

Endpoint parse_endpoint(const std::string& text) {
  Endpoint ep;
  if (text == "inproc") {
    ep.inproc = true;
    return ep;
  }
  const std::size_t colon = text.rfind(':');
  if (colon == std::string::npos || colon == 0 || colon + 1 >= text.size())
    throw ConfigError("bus endpoint must be 'inproc' or 'host:port', got: " + text);
  ep.host = text.substr(0, colon);
  const std::string port_str = text.substr(colon + 1);
  unsigned value = 0;
  auto [p, ec] = std::from_chars(port_str.data(), port_str.data() + port_str.size(), value);
  if (ec != std::errc() || p != port_str.data() + port_str.size() || value > 0xffff)
    throw ConfigError("bad bus port: " + port_str);
  ep.port = static_cast<std::uint16_t>(value);
  return ep;
}

std::unique_ptr<BusClient> make_client(const std::string& endpoint,
                                       std::shared_ptr<BusCore> core) {
  const Endpoint ep = parse_endpoint(endpoint);
  if (ep.inproc) {
    if (!core) throw ConfigError("inproc bus endpoint needs an in-process core");
    return std::make_unique<InprocClient>(std::move(core));
  }
  return std::make_unique<TcpClient>(ep.host, ep.port);
}

}  // namespace afc::bus
