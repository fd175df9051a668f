#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "afc/env/environment.hpp"
#include "afc/marl/harness.hpp"
#include "afc/marl/reward.hpp"
#include "afc/ppo/learner.hpp"

namespace afc::run {

// Reward payload published per (sim, pe) per action step; wire order of
// the f64 payload on the bus.
struct RewardRecord {
  double global_reward = 0.0;  // R_i
  double local_reward = 0.0;   // r_i
  double drag_term = 0.0;      // cd_b - cd
  double lift_term = 0.0;      // -alpha |cl - cl_avg|
  double cd = 0.0;             // interval-averaged
  double cl = 0.0;             // interval-averaged

  std::vector<double> to_payload() const {
    return {global_reward, local_reward, drag_term, lift_term, cd, cl};
  }
  static RewardRecord from_payload(const std::vector<double>& p);
};

// Worker's source of actions: the distributed implementation talks to the
// bus; the local one samples the policy directly.
class ActionProvider {
 public:
  virtual ~ActionProvider() = default;
  // Stacked observations per pseudo-env in, amplitudes per pseudo-env out.
  virtual std::vector<double> actions_for(std::uint64_t step,
                                          const std::vector<std::vector<double>>& obs) = 0;
  virtual void publish_rewards(std::uint64_t step, const std::vector<RewardRecord>& recs) = 0;
  virtual void publish_terminal(const std::vector<std::vector<double>>& obs) = 0;
};

struct EpisodeOutcome {
  bool completed = false;
  std::uint64_t diverged_step = 0;
  // per action step, per pe records (for stats/tests)
  std::vector<std::vector<RewardRecord>> records;
};

// Runs one episode of the paper's control loop: probe -> stacked
// observation -> action -> exponentially smoothed substeps -> interval
// forces -> Eq.1 local and Eq.2 global rewards. Returns incomplete on
// solver divergence.
EpisodeOutcome run_worker_episode(env::Environment& env, const marl::EpisodeSchedule& schedule,
                                  const marl::PseudoEnvTopology& topology,
                                  const marl::RewardWeights& weights,
                                  const std::vector<double>& cd_baseline, double obs_scale,
                                  ActionProvider& provider);

// Collects the stacked observations for every pseudo-env.
std::vector<std::vector<double>> stacked_observations(const env::Environment& env,
                                                      const marl::PseudoEnvTopology& topology,
                                                      double obs_scale);

struct EpisodeStats {
  double mean_cd = 0.0;
  double rms_cl = 0.0;
  double mean_reward = 0.0;
  double drag_term = 0.0;
  double lift_term = 0.0;
};

// Trailing-window statistics (window given in action steps) over the
// per-step per-pe records, rms taken per stream about its window mean.
EpisodeStats trailing_stats(const std::vector<std::vector<RewardRecord>>& records,
                            int window_steps);

struct LocalEpisodeResult {
  marl::TrajectoryBatch batch;  // single simulation
  EpisodeStats stats;
  EpisodeOutcome outcome;
};

// In-process variant of the episode loop (single simulation): samples the
// learner's policy directly and assembles the trajectory batch, including
// the bootstrap values. `rng` is consumed once per (pe, step) sample; in
// deterministic mode no rng is consumed.
LocalEpisodeResult run_episode(env::Environment& env, ppo::PpoLearner& learner,
                               const marl::EpisodeSchedule& schedule,
                               const marl::PseudoEnvTopology& topology,
                               const marl::RewardWeights& weights,
                               const std::vector<double>& cd_baseline, double obs_scale,
                               std::mt19937_64& rng, bool deterministic,
                               int stats_window_steps);

}  // namespace afc::run
