#pragma once

#include <span>
#include <vector>

#include "afc/errors.hpp"

namespace afc::ppo {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;
};

// Generalized advantage estimation over one trajectory, truncated with a
// bootstrap value for the state after the last transition. Advantages are
// returned unnormalized; returns = advantages + values.
inline GaeResult gae(std::span<const double> rewards, std::span<const double> values,
                     double bootstrap_value, double gamma, double lambda) {
  if (rewards.empty()) throw WorkerError("gae: empty input");
  if (rewards.size() != values.size()) throw WorkerError("gae: length mismatch");
  const std::size_t n = rewards.size();
  GaeResult out;
  out.advantages.assign(n, 0.0);
  out.returns.assign(n, 0.0);
  double next_adv = 0.0;
  double next_value = bootstrap_value;
  for (std::size_t t = n; t-- > 0;) {
    const double delta = rewards[t] + gamma * next_value - values[t];
    next_adv = delta + gamma * lambda * next_adv;
    out.advantages[t] = next_adv;
    out.returns[t] = next_adv + values[t];
    next_value = values[t];
  }
  return out;
}

}  // namespace afc::ppo
