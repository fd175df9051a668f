#pragma once

#include <filesystem>
#include <memory>

#include "afc/env/adapters.hpp"
#include "afc/run/run_config.hpp"
#include "afc/run/spectrum.hpp"

namespace afc::run {

struct BaselineResult {
  std::vector<double> cd_b;  // per pseudo-env
  double cl_rms = 0.0;       // fluctuation rms over the window (pe mean)
  double shedding_period_cu = 0.0;
  double strouhal = 0.0;
  double t_eps_cu = 0.0;  // six shedding periods
};

std::unique_ptr<env::Environment> make_environment(const RunConfig& config);

// Uncontrolled run: seeded cold start, fixed transient discard, force
// recording over the measurement window, shedding period from the lift
// spectrum, snapshot + stats + force CSV under <out>/baseline/.
BaselineResult run_baseline(const RunConfig& config);

BaselineResult read_baseline_stats(const std::filesystem::path& out_dir);
void load_environment_baseline(env::Environment& env, const RunConfig& config,
                               const std::filesystem::path& out_dir);

inline std::filesystem::path baseline_dir(const std::filesystem::path& out_dir) {
  return out_dir / "baseline";
}

}  // namespace afc::run
