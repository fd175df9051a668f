#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

#include "afc/marl/harness.hpp"
#include "afc/ppo/adam.hpp"
#include "afc/ppo/policy.hpp"

namespace afc::ppo {

struct PpoConfig {
  int hidden = 512;
  double clip_epsilon = 0.2;
  double gamma = 0.99;
  double gae_lambda = 0.95;
  double learning_rate = 3e-4;
  int epochs_per_update = 10;
  int minibatch_size = 30;
  double entropy_coefficient = 0.005;
  double value_coefficient = 0.5;
  double max_grad_norm = 0.5;
  double initial_log_std = -0.5;

  void validate() const;
};

// Flat view of a complete trajectory batch after advantage estimation.
struct UpdateBatch {
  std::vector<std::vector<double>> observations;
  std::vector<double> actions;
  std::vector<double> old_log_probs;
  std::vector<double> advantages;
  std::vector<double> returns;

  std::size_t size() const { return actions.size(); }
};

struct UpdateDiagnostics {
  bool applied = false;
  double mean_ratio = 0.0;
  double clip_fraction = 0.0;
  double policy_objective = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double grad_norm = 0.0;
  int minibatches = 0;
};

// Actor-critic PPO learner with the clipped surrogate objective. The
// policy mean net, the log-std parameter and the value net form one flat
// parameter vector (in that order) shared by the optimizer, the
// checkpoint format and the finite-difference checks.
class PpoLearner {
 public:
  PpoLearner(int obs_dim, const PpoConfig& config);

  void init(std::uint64_t seed);

  const PpoConfig& config() const { return config_; }
  GaussianPolicy& policy() { return policy_; }
  const GaussianPolicy& policy() const { return policy_; }
  Mlp& value_net() { return value_net_; }
  const Mlp& value_net() const { return value_net_; }
  Adam& optimizer() { return adam_; }
  std::uint64_t episodes_trained() const { return episodes_trained_; }
  void set_episodes_trained(std::uint64_t e) { episodes_trained_ = e; }

  std::size_t param_count() const;
  std::vector<double> flat_params() const;
  void set_flat_params(std::span<const double> p);

  double value(std::span<const double> obs) const { return value_net_.forward(obs); }

  // GAE per (sim, pseudo-env) stream, flattened for the update.
  UpdateBatch prepare(const marl::TrajectoryBatch& batch) const;

  // Clipped-surrogate objective (to be maximized) averaged over the given
  // transitions; pure function of the current parameters. No advantage
  // normalization happens here.
  double objective(const UpdateBatch& batch, std::span<const std::size_t> idx) const;

  // Same, also accumulating dJ/dparams into grad (flat layout).
  double objective_with_grad(const UpdateBatch& batch, std::span<const std::size_t> idx,
                             std::span<double> grad) const;

  // Runs epochs_per_update passes of shuffled minibatch ascent with
  // per-batch advantage normalization and global-norm gradient clipping.
  // A non-finite loss or gradient rolls the parameters back and reports
  // applied = false.
  UpdateDiagnostics update(const UpdateBatch& batch, std::mt19937_64& rng);

 private:
  PpoConfig config_;
  GaussianPolicy policy_;
  Mlp value_net_;
  Adam adam_;
  std::uint64_t episodes_trained_ = 0;
};

}  // namespace afc::ppo
