#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "afc/errors.hpp"

namespace afc::marl {

// Ring of pseudo-environments. With a single pseudo-env each side
// neighbour is the env itself, so the stacked-observation path is
// always exercised.
struct PseudoEnvTopology {
  int n_jets = 1;

  explicit PseudoEnvTopology(int n = 1) : n_jets(n) {
    if (n_jets < 1) throw ConfigError("topology needs at least one pseudo-environment");
  }
  int left(int i) const { return (i + n_jets - 1) % n_jets; }
  int right(int i) const { return (i + 1) % n_jets; }
};

// Exact running mean: keeps the sum so that the incremental value equals
// the batch-recomputed mean bit for bit.
class RunningMean {
 public:
  void add(double x) {
    sum_ += x;
    ++count_;
  }
  void reset() {
    sum_ = 0.0;
    count_ = 0;
  }
  std::uint64_t count() const { return count_; }
  double mean() const { return count_ == 0 ? 0.0 : sum_ / static_cast<double>(count_); }

 private:
  double sum_ = 0.0;
  std::uint64_t count_ = 0;
};

// Per-pseudo-env baseline drag plus the episode-accumulated mean lift.
struct BaselineStats {
  double cd_b = 0.0;
  RunningMean cl;

  void begin_episode() { cl.reset(); }
};

// Action/episode timing. All durations are in convective units; a substep
// is one solver step (LBM) or one integrator step (surrogate).
// t_act = substeps_per_action * dt_cu and t_eps = n_actions * t_act hold
// exactly by construction.
struct EpisodeSchedule {
  int n_actions = 120;
  int substeps_per_action = 1;
  double dt_cu = 1.0;

  double t_act() const { return substeps_per_action * dt_cu; }
  double t_eps() const { return n_actions * t_act(); }

  void validate() const {
    if (n_actions < 1) throw ConfigError("schedule: n_actions must be >= 1");
    if (substeps_per_action < 1) throw ConfigError("schedule: substeps must be >= 1");
    if (!(dt_cu > 0.0)) throw ConfigError("schedule: dt must be > 0");
  }
};

// Chooses the substep count so that n_actions action intervals cover six
// baseline shedding periods as closely as the substep quantum allows.
inline EpisodeSchedule make_schedule(double shedding_period_cu, int n_actions, double dt_cu,
                                     int periods_per_episode = 6) {
  if (!(shedding_period_cu > 0.0)) throw ConfigError("schedule: shedding period must be > 0");
  EpisodeSchedule s;
  s.n_actions = n_actions;
  s.dt_cu = dt_cu;
  const double t_eps_target = periods_per_episode * shedding_period_cu;
  const double t_act_target = t_eps_target / n_actions;
  s.substeps_per_action = std::max(1, static_cast<int>(t_act_target / dt_cu + 0.5));
  s.validate();
  return s;
}

struct Transition {
  std::vector<double> observation;  // stacked [left, self, right]
  double action = 0.0;              // front-jet amplitude, dimensionless
  double log_prob = 0.0;
  double value = 0.0;
  double reward = 0.0;  // R_i
};

// One trajectory per (simulation, pseudo-env) stream plus its bootstrap
// value for truncated-episode advantage estimation.
struct TrajectoryBatch {
  int n_sims = 0;
  int n_jets = 0;
  int n_actions = 0;
  // stream index = sim * n_jets + pe
  std::vector<std::vector<Transition>> streams;
  std::vector<double> bootstrap_values;
  bool complete = false;

  void init(int sims, int jets, int actions) {
    n_sims = sims;
    n_jets = jets;
    n_actions = actions;
    streams.assign(static_cast<std::size_t>(sims) * jets, {});
    for (auto& s : streams) s.reserve(actions);
    bootstrap_values.assign(streams.size(), 0.0);
    complete = false;
  }

  std::size_t stream_index(int sim, int pe) const {
    return static_cast<std::size_t>(sim) * n_jets + pe;
  }

  // A batch is usable by the learner only if every stream holds exactly
  // n_actions transitions.
  bool check_complete() const {
    for (const auto& s : streams) {
      if (static_cast<int>(s.size()) != n_actions) return false;
    }
    return !streams.empty();
  }

  std::size_t total_transitions() const {
    std::size_t n = 0;
    for (const auto& s : streams) n += s.size();
    return n;
  }
};

}  // namespace afc::marl
