#include "afc/ppo/policy.hpp"

#include <algorithm>
#include <cmath>

namespace afc::ppo {

namespace {
constexpr double kLogSqrt2Pi = 0.91893853320467274178;  // 0.5*log(2*pi)
}

double log_one_minus_tanh_sq(double z) {
  // log(1 - tanh(z)^2) = 2*(log 2 - |z| - log1p(exp(-2|z|))), stable for large |z|
  const double az = std::abs(z);
  return 2.0 * (std::log(2.0) - az - std::log1p(std::exp(-2.0 * az)));
}

GaussianPolicy::GaussianPolicy(int obs_dim, int hidden, double action_scale)
    : mean_net_(obs_dim, hidden), scale_(action_scale) {
  if (!(action_scale > 0.0)) throw ConfigError("policy: action scale must be > 0");
}

void GaussianPolicy::init(std::mt19937_64& rng, double initial_log_std) {
  mean_net_.init(rng);
  log_std_ = initial_log_std;
}

std::pair<double, double> GaussianPolicy::forward(std::span<const double> obs) const {
  const double mean = mean_net_.forward(obs);
  return {mean, std::exp(log_std_)};
}

GaussianPolicy::Sample GaussianPolicy::sample(std::span<const double> obs,
                                              std::mt19937_64& rng) const {
  const auto [mean, std] = forward(obs);
  std::normal_distribution<double> dist(0.0, 1.0);
  const double z = mean + std * dist(rng);
  Sample s;
  s.action = scale_ * std::tanh(z);
  const double u = (z - mean) / std;
  s.log_prob =
      -0.5 * u * u - kLogSqrt2Pi - log_std_ - std::log(scale_) - log_one_minus_tanh_sq(z);
  return s;
}

double GaussianPolicy::log_prob(double mean, double action) const {
  const double t = std::clamp(action / scale_, -1.0 + 1e-15, 1.0 - 1e-15);
  const double z = std::atanh(t);
  const double std = std::exp(log_std_);
  const double u = (z - mean) / std;
  return -0.5 * u * u - kLogSqrt2Pi - log_std_ - std::log(scale_) - log_one_minus_tanh_sq(z);
}

double GaussianPolicy::deterministic_action(std::span<const double> obs) const {
  return scale_ * std::tanh(mean_net_.forward(obs));
}

double GaussianPolicy::entropy() const {
  // 0.5*log(2*pi*e) + log_std
  return 0.5 * std::log(2.0 * M_PI * M_E) + log_std_;
}

}  // namespace afc::ppo
