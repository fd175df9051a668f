#pragma once

#include <cstdint>
#include <filesystem>
#include <string>

#include "afc/lbm/flow_config.hpp"
#include "afc/marl/reward.hpp"
#include "afc/ppo/learner.hpp"
#include "afc/surrogate/oscillator.hpp"

namespace afc::run {

// Fully resolved run configuration. The on-disk format is a flat
// key = value text file with [section] headers matching the module names;
// unknown keys are config errors.
struct RunConfig {
  // top level
  std::string environment = "surrogate";  // "surrogate" | "lbm"
  std::uint64_t seed = 1;
  std::string out_dir = "runs/run";

  // [marl-harness]
  int n_sims = 4;
  int n_jets = 3;
  int n_probes = 32;
  marl::RewardWeights weights;
  int n_actions = 120;
  int episodes = 200;
  double stats_window_cu = 5.0;
  double obs_scale = -1.0;  // <0: environment default
  bool plateau_stop = true;
  double plateau_improve = 0.01;
  int plateau_lookback = 20;
  int plateau_window = 10;
  int min_episodes = 40;

  // [lbm-flow]
  lbm::FlowConfig flow;

  // [surrogate-env]
  surrogate::OscillatorParams osc;

  // [ppo-agent]
  ppo::PpoConfig ppo;

  // [exchange-bus]
  std::string bus_endpoint = "inproc";
  std::int64_t worker_timeout_ms = 120000;

  // [cli]
  double baseline_transient_cu = 20.0;
  double baseline_window_cu = 60.0;
  double eval_horizon_cu = 40.0;
  double eval_transient_cu = 20.0;
  int checkpoint_every = 10;

  int obs_dim() const { return 3 * n_probes; }
  double resolved_obs_scale() const {
    if (obs_scale > 0.0) return obs_scale;
    if (environment == "lbm")
      return 1.0 / (0.5 * flow.inflow_speed * flow.inflow_speed);
    return 1.0;
  }

  void validate() const;
};

RunConfig parse_run_config_text(const std::string& text);
RunConfig parse_run_config(const std::filesystem::path& path);

// Serializes every key with its resolved value; parsing the output again
// reproduces the same configuration.
std::string render_run_config(const RunConfig& config);
void write_resolved_config(const RunConfig& config, const std::filesystem::path& path);

}  // namespace afc::run
