#pragma once

#include <random>
#include <span>

#include "afc/ppo/mlp.hpp"

namespace afc::ppo {

// log(1 - tanh(z)^2), stable for large |z|.
double log_one_minus_tanh_sq(double z);

// Gaussian policy over the front-jet amplitude, shared across all
// pseudo-environments. The network outputs the mean; the log standard
// deviation is a single state-independent parameter. Samples are squashed
// with a = scale * tanh(z) so actions stay strictly inside the bound and
// the log density is defined everywhere.
class GaussianPolicy {
 public:
  GaussianPolicy(int obs_dim, int hidden, double action_scale);

  int obs_dim() const { return mean_net_.in_dim(); }
  int hidden() const { return mean_net_.hidden(); }
  double action_scale() const { return scale_; }

  Mlp& mean_net() { return mean_net_; }
  const Mlp& mean_net() const { return mean_net_; }
  double log_std() const { return log_std_; }
  void set_log_std(double v) { log_std_ = v; }

  void init(std::mt19937_64& rng, double initial_log_std = -0.5);

  struct Sample {
    double action;
    double log_prob;
  };

  // mean/std of the pre-squash Gaussian
  std::pair<double, double> forward(std::span<const double> obs) const;

  Sample sample(std::span<const double> obs, std::mt19937_64& rng) const;

  // Density of a previously squashed action under the current parameters
  // (includes the tanh Jacobian correction).
  double log_prob(double mean, double action) const;

  // Evaluation mode: no rng consumption.
  double deterministic_action(std::span<const double> obs) const;

  // Differential entropy of the pre-squash Gaussian.
  double entropy() const;

 private:
  Mlp mean_net_;
  double log_std_ = -0.5;
  double scale_;
};

}  // namespace afc::ppo
