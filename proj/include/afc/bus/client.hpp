#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "afc/bus/core.hpp"

namespace afc::bus {

// Client view of the exchange. Network and in-process implementations
// share the exact same semantics; the trainer picks one from the
// endpoint string ("inproc" or "host:port").
class BusClient {
 public:
  virtual ~BusClient() = default;

  // Throws ProtocolError on overwrite of an un-taken key.
  virtual void put(const std::string& key, const std::vector<double>& payload) = 0;
  virtual std::optional<std::vector<double>> get(const std::string& key) = 0;
  virtual std::optional<std::vector<double>> take(const std::string& key) = 0;
  virtual std::optional<std::vector<double>> wait_take(const std::string& key,
                                                       std::int64_t timeout_ms) = 0;
  virtual bool ping() = 0;
  virtual void shutdown_server() = 0;
};

class InprocClient final : public BusClient {
 public:
  explicit InprocClient(std::shared_ptr<BusCore> core) : core_(std::move(core)) {}

  void put(const std::string& key, const std::vector<double>& payload) override;
  std::optional<std::vector<double>> get(const std::string& key) override;
  std::optional<std::vector<double>> take(const std::string& key) override;
  std::optional<std::vector<double>> wait_take(const std::string& key,
                                               std::int64_t timeout_ms) override;
  bool ping() override { return !core_->closed(); }
  void shutdown_server() override { core_->shutdown(); }

 private:
  std::shared_ptr<BusCore> core_;
};

class TcpClient final : public BusClient {
 public:
  // Retries the connection for up to connect_timeout_ms (the bus process
  // may still be starting).
  TcpClient(const std::string& host, std::uint16_t port, std::int64_t connect_timeout_ms = 5000);
  ~TcpClient() override;

  TcpClient(const TcpClient&) = delete;
  TcpClient& operator=(const TcpClient&) = delete;

  void put(const std::string& key, const std::vector<double>& payload) override;
  std::optional<std::vector<double>> get(const std::string& key) override;
  std::optional<std::vector<double>> take(const std::string& key) override;
  std::optional<std::vector<double>> wait_take(const std::string& key,
                                               std::int64_t timeout_ms) override;
  bool ping() override;
  void shutdown_server() override;

 private:
  struct Ctx;
  std::unique_ptr<Ctx> ctx_;
};

struct Endpoint {
  bool inproc = false;
  std::string host;
  std::uint16_t port = 0;
};

// Parses "inproc" or "host:port".
Endpoint parse_endpoint(const std::string& text);

// For inproc endpoints `core` must be non-null.
std::unique_ptr<BusClient> make_client(const std::string& endpoint,
                                       std::shared_ptr<BusCore> core = nullptr);

}  // namespace afc::bus
