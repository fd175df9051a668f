#pragma once

#include <condition_variable>
#include <cstdint>
#include <mutex>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace afc::bus {

struct BusCounters {
  std::uint64_t puts = 0;
  std::uint64_t gets = 0;
  std::uint64_t takes = 0;
  std::uint64_t misses = 0;
  std::uint64_t duplicate_puts = 0;
};

// In-memory key->payload store with blocking consumption. All mutation is
// serialized through one mutex; a PUT wakes blocked WAIT_TAKEs and the
// first waiter to reacquire the lock consumes the entry (exactly-once).
class BusCore {
 public:
  enum class PutResult { ok, duplicate, closed };

  PutResult put(const std::string& key, std::vector<double> payload);

  std::optional<std::vector<double>> get(const std::string& key);

  std::optional<std::vector<double>> take(const std::string& key);

  // Blocks until a matching put or the timeout; consumes the entry.
  std::optional<std::vector<double>> wait_take(const std::string& key, std::int64_t timeout_ms);

  // Releases all waiters (they report a miss) and refuses further puts.
  void shutdown();
  bool closed() const;

  BusCounters counters() const;
  std::size_t stored_keys() const;

 private:
  mutable std::mutex mu_;
  std::condition_variable cv_;
  std::unordered_map<std::string, std::vector<double>> store_;
  BusCounters counters_;
  bool closed_ = false;
};

}  // namespace afc::bus
