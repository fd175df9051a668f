#include "afc/ppo/learner.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "afc/ppo/gae.hpp"
#include "afc/rng.hpp"

namespace afc::ppo {

void PpoConfig::validate() const {
  if (hidden < 1) throw ConfigError("ppo: hidden size must be >= 1");
  if (!(clip_epsilon > 0.0 && clip_epsilon < 1.0))
    throw ConfigError("ppo: clip_epsilon must be in (0, 1)");
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ConfigError("ppo: gamma must be in [0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0))
    throw ConfigError("ppo: gae_lambda must be in [0, 1]");
  if (!(learning_rate > 0.0)) throw ConfigError("ppo: learning_rate must be > 0");
  if (epochs_per_update < 1) throw ConfigError("ppo: epochs_per_update must be >= 1");
  if (minibatch_size < 1) throw ConfigError("ppo: minibatch_size must be >= 1");
  if (entropy_coefficient < 0.0) throw ConfigError("ppo: entropy coefficient must be >= 0");
  if (value_coefficient < 0.0) throw ConfigError("ppo: value coefficient must be >= 0");
  if (!(max_grad_norm > 0.0)) throw ConfigError("ppo: max_grad_norm must be > 0");
}

PpoLearner::PpoLearner(int obs_dim, const PpoConfig& config)
    : config_(config),
      policy_(obs_dim, config.hidden, marl::kActionBound),
      value_net_(obs_dim, config.hidden) {
  config_.validate();
  adam_.resize(param_count());
}

void PpoLearner::init(std::uint64_t seed) {
  auto rng = make_rng(seed, "policy-init");
  policy_.init(rng, config_.initial_log_std);
  value_net_.init(rng, 1.0);
  adam_.resize(param_count());
  episodes_trained_ = 0;
}

std::size_t PpoLearner::param_count() const {
  return policy_.mean_net().param_count() + 1 + value_net_.param_count();
}

std::vector<double> PpoLearner::flat_params() const {
  std::vector<double> out;
  out.reserve(param_count());
  const auto& p = policy_.mean_net().params();
  out.insert(out.end(), p.begin(), p.end());
  out.push_back(policy_.log_std());
  const auto& v = value_net_.params();
  out.insert(out.end(), v.begin(), v.end());
  return out;
}

void PpoLearner::set_flat_params(std::span<const double> p) {
  if (p.size() != param_count()) throw ConfigError("learner: flat parameter size mismatch");
  auto& mp = policy_.mean_net().params();
  std::copy(p.begin(), p.begin() + mp.size(), mp.begin());
  policy_.set_log_std(p[mp.size()]);
  auto& vp = value_net_.params();
  std::copy(p.begin() + mp.size() + 1, p.end(), vp.begin());
}

UpdateBatch PpoLearner::prepare(const marl::TrajectoryBatch& batch) const {
  if (!batch.check_complete()) throw WorkerError("ppo: incomplete trajectory batch");
  UpdateBatch out;
  const std::size_t total = batch.total_transitions();
  out.observations.reserve(total);
  out.actions.reserve(total);
  out.old_log_probs.reserve(total);
  out.advantages.reserve(total);
  out.returns.reserve(total);

  std::vector<double> rewards, values;
  for (std::size_t s = 0; s < batch.streams.size(); ++s) {
    const auto& stream = batch.streams[s];
    rewards.clear();
    values.clear();
    for (const auto& tr : stream) {
      rewards.push_back(tr.reward);
      values.push_back(tr.value);
    }
    GaeResult g = gae(rewards, values, batch.bootstrap_values[s], config_.gamma,
                      config_.gae_lambda);
    for (std::size_t t = 0; t < stream.size(); ++t) {
      out.observations.push_back(stream[t].observation);
      out.actions.push_back(stream[t].action);
      out.old_log_probs.push_back(stream[t].log_prob);
      out.advantages.push_back(g.advantages[t]);
      out.returns.push_back(g.returns[t]);
    }
  }
  return out;
}

namespace {

struct SampleEval {
  double objective;
  double ratio;
  bool clipped;
};

}  // namespace

double PpoLearner::objective(const UpdateBatch& batch, std::span<const std::size_t> idx) const {
  return objective_with_grad(batch, idx, {});
}

double PpoLearner::objective_with_grad(const UpdateBatch& batch,
                                       std::span<const std::size_t> idx,
                                       std::span<double> grad) const {
  const bool want_grad = !grad.empty();
  const double inv_m = 1.0 / static_cast<double>(idx.size());
  const double eps = config_.clip_epsilon;
  const double sigma = std::exp(policy_.log_std());
  const double scale = policy_.action_scale();
  const std::size_t mp = policy_.mean_net().param_count();

  double total = 0.0;
  Mlp::Cache pc, vc;
  for (std::size_t i : idx) {
    const auto& obs = batch.observations[i];
    const double mean = policy_.mean_net().forward(obs, pc);
    const double v = value_net_.forward(obs, vc);

    const double t = std::clamp(batch.actions[i] / scale, -1.0 + 1e-15, 1.0 - 1e-15);
    const double z = std::atanh(t);
    const double u = (z - mean) / sigma;
    const double log_prob = -0.5 * u * u - 0.91893853320467274178 - policy_.log_std() -
                            std::log(scale) - log_one_minus_tanh_sq(z);
    const double ratio = std::exp(log_prob - batch.old_log_probs[i]);
    const double adv = batch.advantages[i];

    const double unclipped = ratio * adv;
    const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps) * adv;
    const double clip_term = std::min(unclipped, clipped);

    const double verr = v - batch.returns[i];
    const double value_term = config_.value_coefficient * verr * verr;
    const double entropy_term = config_.entropy_coefficient * policy_.entropy();

    total += clip_term - value_term + entropy_term;

    if (want_grad) {
      const double dj_dratio = (unclipped <= clipped) ? adv * inv_m : 0.0;
      if (dj_dratio != 0.0) {
        const double dj_dlogp = dj_dratio * ratio;
        const double dj_dmean = dj_dlogp * (u / sigma);
        policy_.mean_net().backward(pc, dj_dmean, grad.subspan(0, mp));
        grad[mp] += dj_dlogp * (u * u - 1.0);
      }
      grad[mp] += config_.entropy_coefficient * inv_m;
      const double dj_dv = -2.0 * config_.value_coefficient * verr * inv_m;
      value_net_.backward(vc, dj_dv, grad.subspan(mp + 1, value_net_.param_count()));
    }
  }
  return total * inv_m;
}

UpdateDiagnostics PpoLearner::update(const UpdateBatch& batch, std::mt19937_64& rng) {
  UpdateDiagnostics diag;
  const std::size_t n = batch.size();
  if (n == 0) throw WorkerError("ppo: empty update batch");

  // Per-batch advantage normalization.
  UpdateBatch work = batch;
  double mean = std::accumulate(work.advantages.begin(), work.advantages.end(), 0.0) /
                static_cast<double>(n);
  double var = 0.0;
  for (double a : work.advantages) var += (a - mean) * (a - mean);
  var /= static_cast<double>(n);
  const double inv_std = 1.0 / (std::sqrt(var) + 1e-8);
  for (double& a : work.advantages) a = (a - mean) * inv_std;

  const std::vector<double> saved_params = flat_params();
  const std::vector<double> saved_m = adam_.m();
  const std::vector<double> saved_v = adam_.v();
  const std::uint64_t saved_t = adam_.steps();

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  const std::size_t mb = std::min<std::size_t>(config_.minibatch_size, n);

  std::vector<double> grad(param_count());
  std::vector<double> params = flat_params();
  double ratio_sum = 0.0, clip_count = 0.0, obj_sum = 0.0, vloss_sum = 0.0;
  std::size_t sample_count = 0;
  bool failed = false;

  for (int epoch = 0; epoch < config_.epochs_per_update && !failed; ++epoch) {
    std::shuffle(order.begin(), order.end(), rng);
    for (std::size_t start = 0; start + mb <= n && !failed; start += mb) {
      std::span<const std::size_t> idx(order.data() + start, mb);
      std::fill(grad.begin(), grad.end(), 0.0);
      const double obj = objective_with_grad(work, idx, grad);
      if (!std::isfinite(obj)) {
        failed = true;
        break;
      }
      // stats on this minibatch (pre-step parameters)
      for (std::size_t i : idx) {
        const double mean_i = policy_.mean_net().forward(work.observations[i]);
        const double lp = policy_.log_prob(mean_i, work.actions[i]);
        const double ratio = std::exp(lp - work.old_log_probs[i]);
        ratio_sum += ratio;
        if (std::abs(ratio - 1.0) > config_.clip_epsilon) clip_count += 1.0;
        const double verr = value_net_.forward(work.observations[i]) - work.returns[i];
        vloss_sum += verr * verr;
        ++sample_count;
      }
      obj_sum += obj;
      ++diag.minibatches;

      // ascent: descend on -J
      double norm2 = 0.0;
      for (double& g : grad) {
        g = -g;
        norm2 += g * g;
      }
      const double norm = std::sqrt(norm2);
      if (!std::isfinite(norm)) {
        failed = true;
        break;
      }
      diag.grad_norm = norm;
      if (norm > config_.max_grad_norm) {
        const double scale = config_.max_grad_norm / norm;
        for (double& g : grad) g *= scale;
      }
      adam_.step(params, grad, config_.learning_rate);
      set_flat_params(params);
    }
  }

  bool finite = true;
  for (double p : params) {
    if (!std::isfinite(p)) {
      finite = false;
      break;
    }
  }

  if (failed || !finite) {
    set_flat_params(saved_params);
    adam_.restore(saved_m, saved_v, saved_t);
    diag.applied = false;
    return diag;
  }

  diag.applied = true;
  if (sample_count > 0) {
    diag.mean_ratio = ratio_sum / static_cast<double>(sample_count);
    diag.clip_fraction = clip_count / static_cast<double>(sample_count);
    diag.value_loss = vloss_sum / static_cast<double>(sample_count);
  }
  diag.policy_objective = diag.minibatches > 0 ? obj_sum / diag.minibatches : 0.0;
  diag.entropy = policy_.entropy();
  return diag;
}

}  // namespace afc::ppo
