#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <vector>

#include "afc/errors.hpp"

namespace afc::marl {

// Agent action bound: |U_jet / U_inf| <= 1.125.
inline constexpr double kActionBound = 1.125;

struct RewardWeights {
  double alpha = 0.3;  // lift-oscillation penalty weight
  double beta = 0.8;   // local vs. global mix

  void validate() const {
    if (!(alpha >= 0.0)) throw ConfigError("reward alpha must be >= 0");
    if (!(beta >= 0.0 && beta <= 1.0)) throw ConfigError("reward beta must be in [0, 1]");
  }
};

// r_i = (cd_b - cd) - alpha * |cl - cl_avg|
inline double local_reward(double cd_b, double cd, double cl, double cl_avg, double alpha) {
  if (!std::isfinite(cd_b) || !std::isfinite(cd) || !std::isfinite(cl) ||
      !std::isfinite(cl_avg) || !std::isfinite(alpha)) {
    throw WorkerError("non-finite input to local_reward");
  }
  return (cd_b - cd) - alpha * std::abs(cl - cl_avg);
}

// R_i = beta * r_i + (1 - beta)/n * sum_j r_j
inline double global_reward(std::span<const double> locals, std::size_t i, double beta) {
  if (locals.empty()) throw WorkerError("global_reward: empty local-reward vector");
  if (i >= locals.size()) throw WorkerError("global_reward: index out of range");
  double sum = 0.0;
  for (double r : locals) sum += r;
  const double n = static_cast<double>(locals.size());
  return beta * locals[i] + (1.0 - beta) / n * sum;
}

// Exponential transition from the previous to the next predicted action.
// amplitude(elapsed) = next + (prev - next) * exp(-5 * elapsed / t_act)
inline double smooth_action(double prev, double next, double elapsed, double t_act) {
  return next + (prev - next) * std::exp(-5.0 * elapsed / t_act);
}

// Rear jet mirrors the front jet: U_front = -U_rear.
inline double pair_constraint(double front_amplitude, double bound = kActionBound) {
  if (!(std::abs(front_amplitude) <= bound)) {
    throw WorkerError("jet amplitude exceeds action bound");
  }
  return -front_amplitude;
}

// Observation stacking: own probes plus the two ring neighbours,
// ordered [left, self, right].
inline std::vector<double> assemble_observation(std::span<const double> self,
                                                std::span<const double> left,
                                                std::span<const double> right) {
  if (self.size() != left.size() || self.size() != right.size()) {
    throw WorkerError("assemble_observation: probe vector length mismatch");
  }
  std::vector<double> obs;
  obs.reserve(3 * self.size());
  obs.insert(obs.end(), left.begin(), left.end());
  obs.insert(obs.end(), self.begin(), self.end());
  obs.insert(obs.end(), right.begin(), right.end());
  return obs;
}

}  // namespace afc::marl
