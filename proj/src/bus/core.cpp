#include "afc/bus/core.hpp"

#include <chrono>

namespace afc::bus {

BusCore::PutResult BusCore::put(const std::string& key, std::vector<double> payload) {
  {
    std::lock_guard<std::mutex> lock(mu_);
    if (closed_) return PutResult::closed;
    auto [it, inserted] = store_.try_emplace(key, std::move(payload));
    if (!inserted) {
      ++counters_.duplicate_puts;
      return PutResult::duplicate;
    }
    ++counters_.puts;
  }
  cv_.notify_all();
  return PutResult::ok;
}

std::optional<std::vector<double>> BusCore::get(const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  ++counters_.gets;
  auto it = store_.find(key);
  if (it == store_.end()) {
    ++counters_.misses;
    return std::nullopt;
  }
  return it->second;
}

std::optional<std::vector<double>> BusCore::take(const std::string& key) {
  std::lock_guard<std::mutex> lock(mu_);
  auto it = store_.find(key);
  if (it == store_.end()) {
    ++counters_.misses;
    return std::nullopt;
  }
  std::vector<double> payload = std::move(it->second);
  store_.erase(it);
  ++counters_.takes;
  return payload;
}

std::optional<std::vector<double>> BusCore::wait_take(const std::string& key,
                                                      std::int64_t timeout_ms) {
  std::unique_lock<std::mutex> lock(mu_);
  const auto deadline =
      std::chrono::steady_clock::now() + std::chrono::milliseconds(timeout_ms);
  for (;;) {
    auto it = store_.find(key);
    if (it != store_.end()) {
      std::vector<double> payload = std::move(it->second);
      store_.erase(it);
      ++counters_.takes;
      return payload;
    }
    if (closed_) break;
    if (cv_.wait_until(lock, deadline) == std::cv_status::timeout) {
      if (store_.find(key) != store_.end()) continue;
      break;
    }
  }
  ++counters_.misses;
  return std::nullopt;
}

void BusCore::shutdown() {
  {
    std::lock_guard<std::mutex> lock(mu_);
    closed_ = true;
  }
  cv_.notify_all();
}

bool BusCore::closed() const {
  std::lock_guard<std::mutex> lock(mu_);
  return closed_;
}

BusCounters BusCore::counters() const {
  std::lock_guard<std::mutex> lock(mu_);
  return counters_;
}

std::size_t BusCore::stored_keys() const {
  std::lock_guard<std::mutex> lock(mu_);
  return store_.size();
}

}  // namespace afc::bus
