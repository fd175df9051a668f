#include "afc/run/baseline.hpp"

#include <cmath>

#include "afc/io_util.hpp"
#include "afc/rng.hpp"

namespace afc::run {

std::unique_ptr<env::Environment> make_environment(const RunConfig& config) {
  if (config.environment == "lbm") {
    return std::make_unique<env::LbmEnvironment>(config.flow);
  }
  return std::make_unique<env::SurrogateEnvironment>(config.n_jets, config.n_probes,
                                                     config.osc);
}

BaselineResult run_baseline(const RunConfig& config) {
  auto env = make_environment(config);
  const int n_pes = env->pseudo_envs();
  const double dt = env->dt_cu();
  const auto dir = baseline_dir(config.out_dir);

  env->init_cold(derive_seed(config.seed, "baseline"));

  const std::vector<double> no_actions(n_pes, 0.0);
  const std::int64_t transient_steps =
      static_cast<std::int64_t>(std::llround(config.baseline_transient_cu / dt));
  const std::int64_t window_steps =
      static_cast<std::int64_t>(std::llround(config.baseline_window_cu / dt));

  for (std::int64_t s = 0; s < transient_steps; ++s) env->substep(no_actions);

  std::vector<double> cd_sum(n_pes, 0.0);
  std::vector<double> cl_series;  // pe 0, for the shedding period
  std::vector<std::vector<double>> cl_all(n_pes);
  cl_series.reserve(window_steps);
  std::string csv = "t,cd,cl\n";
  for (std::int64_t s = 0; s < window_steps; ++s) {
    env->substep(no_actions);
    const auto f = env->forces();
    double cd_mean = 0.0, cl_mean = 0.0;
    for (int pe = 0; pe < n_pes; ++pe) {
      cd_sum[pe] += f[pe].cd;
      cl_all[pe].push_back(f[pe].cl);
      cd_mean += f[pe].cd;
      cl_mean += f[pe].cl;
    }
    cl_series.push_back(f[0].cl);
    csv += fmt_double(env->time_cu()) + "," + fmt_double(cd_mean / n_pes) + "," +
           fmt_double(cl_mean / n_pes) + "\n";
  }

  BaselineResult result;
  result.cd_b.resize(n_pes);
  for (int pe = 0; pe < n_pes; ++pe)
    result.cd_b[pe] = cd_sum[pe] / static_cast<double>(window_steps);

  double rms = 0.0;
  for (int pe = 0; pe < n_pes; ++pe) {
    double mean = 0.0;
    for (double v : cl_all[pe]) mean += v;
    mean /= cl_all[pe].size();
    double var = 0.0;
    for (double v : cl_all[pe]) var += (v - mean) * (v - mean);
    rms += std::sqrt(var / cl_all[pe].size());
  }
  result.cl_rms = rms / n_pes;

  // shedding period from the pe-0 lift spectrum (frequencies are already
  // in 1/convective-unit, so the peak frequency is the Strouhal number)
  SpectrumOptions opts;
  const SpectrumResult spec = require_peak(cl_series, dt, opts);
  result.strouhal = spec.peak_frequency;
  result.shedding_period_cu = 1.0 / spec.peak_frequency;
  result.t_eps_cu = 6.0 * result.shedding_period_cu;

  // artifacts
  env->capture_baseline();
  std::filesystem::create_directories(dir);
  write_text_file(dir / "forces.csv", csv);
  if (config.environment == "lbm") {
    static_cast<env::LbmEnvironment&>(*env).save_baseline_file(dir / "state.afcs");
  } else {
    static_cast<env::SurrogateEnvironment&>(*env).save_baseline_file(dir / "state.csv");
  }
  KvMap kv;
  kv["environment"] = config.environment;
  kv["n_pes"] = std::to_string(n_pes);
  for (int pe = 0; pe < n_pes; ++pe) kv["cd_b_pe" + std::to_string(pe)] = fmt_double(result.cd_b[pe]);
  kv["cl_rms"] = fmt_double(result.cl_rms);
  kv["shedding_period_cu"] = fmt_double(result.shedding_period_cu);
  kv["strouhal"] = fmt_double(result.strouhal);
  kv["t_eps_cu"] = fmt_double(result.t_eps_cu);
  kv["transient_cu"] = fmt_double(config.baseline_transient_cu);
  kv["window_cu"] = fmt_double(config.baseline_window_cu);
  write_kv_file(dir / "stats.ini", kv);
  return result;
}

BaselineResult read_baseline_stats(const std::filesystem::path& out_dir) {
  const auto path = baseline_dir(out_dir) / "stats.ini";
  if (!std::filesystem::exists(path))
    throw ConfigError("no baseline found at " + path.string() + "; run 'afc baseline' first");
  const KvMap kv = read_kv_file(path);
  BaselineResult result;
  const int n_pes = std::stoi(kv.at("n_pes"));
  result.cd_b.resize(n_pes);
  for (int pe = 0; pe < n_pes; ++pe) result.cd_b[pe] = std::stod(kv.at("cd_b_pe" + std::to_string(pe)));
  result.cl_rms = std::stod(kv.at("cl_rms"));
  result.shedding_period_cu = std::stod(kv.at("shedding_period_cu"));
  result.strouhal = std::stod(kv.at("strouhal"));
  result.t_eps_cu = std::stod(kv.at("t_eps_cu"));
  return result;
}

void load_environment_baseline(env::Environment& env, const RunConfig& config,
                               const std::filesystem::path& out_dir) {
  const auto dir = baseline_dir(out_dir);
  if (config.environment == "lbm") {
    static_cast<env::LbmEnvironment&>(env).load_baseline_file(dir / "state.afcs");
  } else {
    static_cast<env::SurrogateEnvironment&>(env).load_baseline_file(dir / "state.csv");
  }
}

}  // namespace afc::run
