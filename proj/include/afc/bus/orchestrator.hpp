#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "afc/bus/client.hpp"
#include "afc/bus/protocol.hpp"

namespace afc::bus {

// Worker fault flags live in a separate step range so they can never
// collide with the learner's per-episode continue/stop flags.
inline constexpr std::uint64_t kFaultFlagBase = 1000000000ULL;

// Flag payload codes.
inline constexpr double kFlagStop = 0.0;
inline constexpr double kFlagContinue = 1.0;
inline constexpr double kFlagDiverged = 3.0;

// Learner-side step barrier: one wait_take per (sim, pe) key, in sim-major
// order, so collection is deterministic regardless of arrival order.
class Orchestrator {
 public:
  Orchestrator(BusClient& client, std::uint64_t run_id, int n_sims, int n_jets,
               std::int64_t timeout_ms)
      : client_(client), run_id_(run_id), n_sims_(n_sims), n_jets_(n_jets),
        timeout_ms_(timeout_ms) {}

  int n_streams() const { return n_sims_ * n_jets_; }

  // Throws WorkerError naming the missing key on timeout.
  std::vector<std::vector<double>> collect(Field field, std::uint64_t step);

  void publish_actions(std::uint64_t step, const std::vector<double>& actions);

  // One full barrier: states in, actions out, rewards in.
  struct StepData {
    std::vector<std::vector<double>> states;
    std::vector<std::vector<double>> rewards;
  };
  using ActFn = std::function<std::vector<double>(const std::vector<std::vector<double>>&)>;
  StepData orchestrate_step(std::uint64_t step, const ActFn& act);

  void broadcast_flag(std::uint64_t episode, double code);

  // Non-destructive check for a worker fault report.
  std::optional<double> fault_flag(int sim, std::uint64_t episode);

  Key key(int sim, int pe, Field field, std::uint64_t step) const {
    return Key{run_id_, static_cast<std::uint64_t>(sim), static_cast<std::uint64_t>(pe),
               field, step};
  }

 private:
  BusClient& client_;
  std::uint64_t run_id_;
  int n_sims_;
  int n_jets_;
  std::int64_t timeout_ms_;
};

}  // namespace afc::bus
