#include "afc/run/episode.hpp"

#include <cmath>

namespace afc::run {

RewardRecord RewardRecord::from_payload(const std::vector<double>& p) {
  if (p.size() != 6) throw ProtocolError("reward payload must have 6 values");
  return {p[0], p[1], p[2], p[3], p[4], p[5]};
}

std::vector<std::vector<double>> stacked_observations(const env::Environment& env,
                                                      const marl::PseudoEnvTopology& topology,
                                                      double obs_scale) {
  const int n = env.pseudo_envs();
  std::vector<std::vector<double>> raw(n);
  for (int pe = 0; pe < n; ++pe) {
    raw[pe] = env.sample_probes(pe);
    for (double& v : raw[pe]) v *= obs_scale;
  }
  std::vector<std::vector<double>> stacked(n);
  for (int pe = 0; pe < n; ++pe) {
    stacked[pe] =
        marl::assemble_observation(raw[pe], raw[topology.left(pe)], raw[topology.right(pe)]);
  }
  return stacked;
}

EpisodeOutcome run_worker_episode(env::Environment& env,
                                  const marl::EpisodeSchedule& schedule,
                                  const marl::PseudoEnvTopology& topology,
                                  const marl::RewardWeights& weights,
                                  const std::vector<double>& cd_baseline, double obs_scale,
                                  ActionProvider& provider) {
  schedule.validate();
  const int n_pes = env.pseudo_envs();
  if (topology.n_jets != n_pes)
    throw ConfigError("episode: topology does not match the environment");
  if (static_cast<int>(cd_baseline.size()) != n_pes)
    throw ConfigError("episode: baseline drag vector does not match pseudo-envs");

  EpisodeOutcome outcome;
  outcome.records.reserve(schedule.n_actions);

  std::vector<marl::BaselineStats> baseline(n_pes);
  for (int pe = 0; pe < n_pes; ++pe) {
    baseline[pe].cd_b = cd_baseline[pe];
    baseline[pe].begin_episode();
  }

  std::vector<double> prev(n_pes, 0.0);
  std::vector<double> next(n_pes, 0.0);
  std::vector<double> amps(n_pes, 0.0);
  std::vector<double> cd_sum(n_pes), cl_sum(n_pes);
  const double t_act = schedule.t_act();

  for (int t = 0; t < schedule.n_actions; ++t) {
    const auto obs = stacked_observations(env, topology, obs_scale);
    next = provider.actions_for(static_cast<std::uint64_t>(t), obs);
    if (static_cast<int>(next.size()) != n_pes)
      throw ProtocolError("episode: action count mismatch");
    for (double a : next) {
      if (!(std::abs(a) <= marl::kActionBound))
        throw WorkerError("episode: action outside the bound");
    }

    std::fill(cd_sum.begin(), cd_sum.end(), 0.0);
    std::fill(cl_sum.begin(), cl_sum.end(), 0.0);
    try {
      for (int s = 0; s < schedule.substeps_per_action; ++s) {
        const double elapsed = (s + 1) * schedule.dt_cu;
        for (int pe = 0; pe < n_pes; ++pe)
          amps[pe] = marl::smooth_action(prev[pe], next[pe], elapsed, t_act);
        env.substep(amps);
        const auto f = env.forces();
        for (int pe = 0; pe < n_pes; ++pe) {
          cd_sum[pe] += f[pe].cd;
          cl_sum[pe] += f[pe].cl;
        }
      }
    } catch (const DivergenceError& e) {
      outcome.completed = false;
      outcome.diverged_step = e.step;
      return outcome;
    }

    const double inv_n = 1.0 / schedule.substeps_per_action;
    std::vector<double> locals(n_pes);
    std::vector<RewardRecord> recs(n_pes);
    for (int pe = 0; pe < n_pes; ++pe) {
      const double cd = cd_sum[pe] * inv_n;
      const double cl = cl_sum[pe] * inv_n;
      baseline[pe].cl.add(cl);
      const double cl_avg = baseline[pe].cl.mean();
      locals[pe] = marl::local_reward(baseline[pe].cd_b, cd, cl, cl_avg, weights.alpha);
      recs[pe].local_reward = locals[pe];
      recs[pe].drag_term = baseline[pe].cd_b - cd;
      recs[pe].lift_term = -weights.alpha * std::abs(cl - cl_avg);
      recs[pe].cd = cd;
      recs[pe].cl = cl;
    }
    for (int pe = 0; pe < n_pes; ++pe)
      recs[pe].global_reward = marl::global_reward(locals, pe, weights.beta);

    provider.publish_rewards(static_cast<std::uint64_t>(t), recs);
    outcome.records.push_back(std::move(recs));
    prev = next;
  }

  provider.publish_terminal(stacked_observations(env, topology, obs_scale));
  outcome.completed = true;
  return outcome;
}

EpisodeStats trailing_stats(const std::vector<std::vector<RewardRecord>>& records,
                            int window_steps) {
  EpisodeStats stats;
  const int n_steps = static_cast<int>(records.size());
  if (n_steps == 0) return stats;
  const int first = std::max(0, n_steps - window_steps);
  const int n_pes = static_cast<int>(records[0].size());
  const int used = n_steps - first;

  double cd = 0.0, reward = 0.0, drag = 0.0, lift = 0.0, rms = 0.0;
  for (int pe = 0; pe < n_pes; ++pe) {
    double cl_mean = 0.0;
    for (int t = first; t < n_steps; ++t) cl_mean += records[t][pe].cl;
    cl_mean /= used;
    double var = 0.0;
    for (int t = first; t < n_steps; ++t) {
      const auto& r = records[t][pe];
      cd += r.cd;
      reward += r.global_reward;
      drag += r.drag_term;
      lift += r.lift_term;
      var += (r.cl - cl_mean) * (r.cl - cl_mean);
    }
    rms += std::sqrt(var / used);
  }
  const double denom = static_cast<double>(used) * n_pes;
  stats.mean_cd = cd / denom;
  stats.mean_reward = reward / denom;
  stats.drag_term = drag / denom;
  stats.lift_term = lift / denom;
  stats.rms_cl = rms / n_pes;
  return stats;
}

namespace {

// Local provider: samples the policy, records transitions.
class LocalProvider final : public ActionProvider {
 public:
  LocalProvider(ppo::PpoLearner& learner, std::mt19937_64& rng, bool deterministic,
                marl::TrajectoryBatch& batch)
      : learner_(learner), rng_(rng), deterministic_(deterministic), batch_(batch) {}

  std::vector<double> actions_for(std::uint64_t,
                                  const std::vector<std::vector<double>>& obs) override {
    std::vector<double> amps(obs.size());
    for (std::size_t pe = 0; pe < obs.size(); ++pe) {
      marl::Transition tr;
      tr.observation = obs[pe];
      tr.value = learner_.value(obs[pe]);
      if (deterministic_) {
        tr.action = learner_.policy().deterministic_action(obs[pe]);
        const double mean = learner_.policy().mean_net().forward(obs[pe]);
        tr.log_prob = learner_.policy().log_prob(mean, tr.action);
      } else {
        const auto s = learner_.policy().sample(obs[pe], rng_);
        tr.action = s.action;
        tr.log_prob = s.log_prob;
      }
      amps[pe] = tr.action;
      batch_.streams[batch_.stream_index(0, static_cast<int>(pe))].push_back(std::move(tr));
    }
    return amps;
  }

  void publish_rewards(std::uint64_t step, const std::vector<RewardRecord>& recs) override {
    for (std::size_t pe = 0; pe < recs.size(); ++pe) {
      auto& stream = batch_.streams[batch_.stream_index(0, static_cast<int>(pe))];
      stream[step].reward = recs[pe].global_reward;
    }
  }

  void publish_terminal(const std::vector<std::vector<double>>& obs) override {
    for (std::size_t pe = 0; pe < obs.size(); ++pe) {
      batch_.bootstrap_values[batch_.stream_index(0, static_cast<int>(pe))] =
          learner_.value(obs[pe]);
    }
  }

 private:
  ppo::PpoLearner& learner_;
  std::mt19937_64& rng_;
  bool deterministic_;
  marl::TrajectoryBatch& batch_;
};

}  // namespace

LocalEpisodeResult run_episode(env::Environment& env, ppo::PpoLearner& learner,
                               const marl::EpisodeSchedule& schedule,
                               const marl::PseudoEnvTopology& topology,
                               const marl::RewardWeights& weights,
                               const std::vector<double>& cd_baseline, double obs_scale,
                               std::mt19937_64& rng, bool deterministic,
                               int stats_window_steps) {
  LocalEpisodeResult result;
  result.batch.init(1, topology.n_jets, schedule.n_actions);
  LocalProvider provider(learner, rng, deterministic, result.batch);
  env.reset();
  result.outcome = run_worker_episode(env, schedule, topology, weights, cd_baseline,
                                      obs_scale, provider);
  result.batch.complete = result.outcome.completed && result.batch.check_complete();
  result.stats = trailing_stats(result.outcome.records, stats_window_steps);
  return result;
}

}  // namespace afc::run
