#pragma once

#include <filesystem>

#include "afc/ppo/learner.hpp"

namespace afc::ppo {

// Binary checkpoint: header {magic "AFCP", version u32}, topology and
// hyperparameter block, then the f64 little-endian parameter tensors in
// declaration order (policy mean net, log_std, value net), then the
// optimizer moments. Round trips are bit exact.
inline constexpr std::uint32_t kCheckpointVersion = 1;

void save_checkpoint(const PpoLearner& learner, const std::filesystem::path& path);

// Restores parameters, optimizer state and episode counter into an
// existing learner; throws ConfigError on topology mismatch, IoError on
// corrupt files or version mismatch.
void load_checkpoint(PpoLearner& learner, const std::filesystem::path& path);

// Reads just the topology so callers can size the learner before loading.
struct CheckpointInfo {
  int obs_dim = 0;
  int hidden = 0;
  std::uint64_t episodes_trained = 0;
};
CheckpointInfo peek_checkpoint(const std::filesystem::path& path);

}  // namespace afc::ppo
