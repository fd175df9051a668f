#include "afc/env/adapters.hpp"

#include "afc/io_util.hpp"

namespace afc::env {

LbmEnvironment::LbmEnvironment(const lbm::FlowConfig& config)
    : config_(config), mask_(lbm::build_obstacle(config_)), probes_(config_, mask_) {
  lattice_ = std::make_unique<lbm::Lattice>(config_, &mask_);
}

void LbmEnvironment::init_cold(std::uint64_t seed) {
  lattice_->init_uniform(config_.inflow_speed, 0.0);
  lattice_->add_seeded_perturbation(seed, config_.init_perturbation);
}

void LbmEnvironment::capture_baseline() {
  baseline_f_ = lattice_->distributions();
  baseline_steps_ = lattice_->step_count();
  has_baseline_ = true;
}

void LbmEnvironment::reset() {
  if (!has_baseline_) throw ConfigError("lbm env: no baseline captured/loaded");
  lattice_->restore_state(baseline_f_, baseline_steps_);
}

std::vector<double> LbmEnvironment::sample_probes(int) const {
  return probes_.sample(*lattice_);
}

void LbmEnvironment::substep(const std::vector<double>& amplitudes) {
  // dimensionless -> lattice units
  scratch_velocities_.resize(amplitudes.size());
  for (std::size_t i = 0; i < amplitudes.size(); ++i)
    scratch_velocities_[i] = amplitudes[i] * config_.inflow_speed;
  lattice_->step(1, scratch_velocities_);
}

std::vector<PeForces> LbmEnvironment::forces() const {
  const lbm::ForceSample s = lattice_->force();
  return {{s.cd, s.cl}};
}

void LbmEnvironment::save_baseline_file(const std::filesystem::path& path) const {
  lattice_->save_snapshot(path);
}

void LbmEnvironment::load_baseline_file(const std::filesystem::path& path) {
  lattice_->load_snapshot(path);
  capture_baseline();
}

SurrogateEnvironment::SurrogateEnvironment(int n_strips, int n_probes,
                                           const surrogate::OscillatorParams& params)
    : ring_(n_strips, params), n_probes_(n_probes) {
  if (n_probes_ < 1) throw ConfigError("surrogate env: n_probes must be >= 1");
}

void SurrogateEnvironment::init_cold(std::uint64_t seed) {
  ring_.init_random_phases(seed);
  time_ = 0.0;
}

void SurrogateEnvironment::capture_baseline() {
  baseline_state_ = ring_.state();
  baseline_time_ = time_;
  has_baseline_ = true;
}

void SurrogateEnvironment::reset() {
  if (!has_baseline_) throw ConfigError("surrogate env: no baseline captured/loaded");
  ring_.state() = baseline_state_;
  time_ = baseline_time_;
}

std::vector<double> SurrogateEnvironment::sample_probes(int pe) const {
  return ring_.probes(pe, n_probes_);
}

void SurrogateEnvironment::substep(const std::vector<double>& amplitudes) {
  ring_.step(amplitudes, ring_.params().dt);
  time_ += ring_.params().dt;
}

std::vector<PeForces> SurrogateEnvironment::forces() const {
  std::vector<PeForces> out(ring_.strips());
  for (int i = 0; i < ring_.strips(); ++i) out[i] = {ring_.cd_syn(i), ring_.cl_syn(i)};
  return out;
}

void SurrogateEnvironment::save_baseline_file(const std::filesystem::path& path) const {
  std::string body = "strip,re,im\n";
  for (int i = 0; i < ring_.strips(); ++i) {
    body += std::to_string(i) + "," + fmt_double(ring_.state()[i].real()) + "," +
            fmt_double(ring_.state()[i].imag()) + "\n";
  }
  write_text_file(path, body);
}

void SurrogateEnvironment::load_baseline_file(const std::filesystem::path& path) {
  const std::string body = read_text_file(path);
  std::size_t pos = body.find('\n');
  int strip = 0;
  while (pos != std::string::npos && pos + 1 < body.size() && strip < ring_.strips()) {
    std::size_t end = body.find('\n', pos + 1);
    const std::string line = body.substr(pos + 1, end == std::string::npos
                                                      ? std::string::npos
                                                      : end - pos - 1);
    if (!line.empty()) {
      const std::size_t c1 = line.find(',');
      const std::size_t c2 = line.find(',', c1 + 1);
      if (c1 == std::string::npos || c2 == std::string::npos)
        throw IoError("bad surrogate baseline line: " + line);
      ring_.state()[strip] = {std::stod(line.substr(c1 + 1, c2 - c1 - 1)),
                              std::stod(line.substr(c2 + 1))};
      ++strip;
    }
    pos = end;
  }
  if (strip != ring_.strips())
    throw IoError("surrogate baseline has wrong strip count: " + path.string());
  time_ = 0.0;
  capture_baseline();
}

}  // namespace afc::env
