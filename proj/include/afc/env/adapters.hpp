#pragma once

#include <complex>
#include <filesystem>
#include <optional>

#include "afc/env/environment.hpp"
#include "afc/lbm/probes.hpp"
#include "afc/surrogate/oscillator.hpp"

namespace afc::env {

// 2D lattice flow environment: one pseudo-environment whose forces are
// the full-body coefficients.
class LbmEnvironment final : public Environment {
 public:
  explicit LbmEnvironment(const lbm::FlowConfig& config);

  int pseudo_envs() const override { return 1; }
  int probes_per_pe() const override { return probes_.count(); }
  double dt_cu() const override { return 1.0 / config_.steps_per_cu(); }

  void init_cold(std::uint64_t seed) override;
  void capture_baseline() override;
  void reset() override;

  std::vector<double> sample_probes(int pe) const override;
  void substep(const std::vector<double>& amplitudes) override;
  std::vector<PeForces> forces() const override;
  double time_cu() const override { return lattice_->time_cu(); }

  lbm::Lattice& lattice() { return *lattice_; }
  const lbm::ObstacleMask& mask() const { return mask_; }
  const lbm::FlowConfig& flow_config() const { return config_; }

  void save_baseline_file(const std::filesystem::path& path) const;
  void load_baseline_file(const std::filesystem::path& path);

 private:
  lbm::FlowConfig config_;
  lbm::ObstacleMask mask_;
  lbm::ProbeSet probes_;
  std::unique_ptr<lbm::Lattice> lattice_;
  std::vector<double> baseline_f_;
  std::uint64_t baseline_steps_ = 0;
  bool has_baseline_ = false;
  std::vector<double> scratch_velocities_;
};

// Stuart-Landau ring environment: one strip per pseudo-environment with
// native per-strip synthetic forces.
class SurrogateEnvironment final : public Environment {
 public:
  SurrogateEnvironment(int n_strips, int n_probes, const surrogate::OscillatorParams& params);

  int pseudo_envs() const override { return ring_.strips(); }
  int probes_per_pe() const override { return n_probes_; }
  double dt_cu() const override { return ring_.params().dt; }

  void init_cold(std::uint64_t seed) override;
  void capture_baseline() override;
  void reset() override;

  std::vector<double> sample_probes(int pe) const override;
  void substep(const std::vector<double>& amplitudes) override;
  std::vector<PeForces> forces() const override;
  double time_cu() const override { return time_; }

  surrogate::OscillatorRing& ring() { return ring_; }

  void save_baseline_file(const std::filesystem::path& path) const;
  void load_baseline_file(const std::filesystem::path& path);

 private:
  surrogate::OscillatorRing ring_;
  int n_probes_;
  double time_ = 0.0;
  std::vector<std::complex<double>> baseline_state_;
  double baseline_time_ = 0.0;
  bool has_baseline_ = false;
};

}  // namespace afc::env
