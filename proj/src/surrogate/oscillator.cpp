#include "afc/surrogate/oscillator.hpp"

#include <cmath>

#include "afc/rng.hpp"

namespace afc::surrogate {

OscillatorRing::OscillatorRing(int n_strips, const OscillatorParams& params)
    : params_(params) {
  if (n_strips < 1) throw ConfigError("surrogate: need at least one strip");
  params_.validate();
  state_.assign(n_strips, {0.0, 0.0});
  k1_.resize(n_strips);
  k2_.resize(n_strips);
  k3_.resize(n_strips);
  k4_.resize(n_strips);
  tmp_.resize(n_strips);
}

void OscillatorRing::init_random_phases(std::uint64_t seed) {
  auto rng = make_rng(seed, "surrogate-init");
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  const double r = params_.limit_cycle_radius();
  for (auto& a : state_) {
    const double p = phase(rng);
    a = {r * std::cos(p), r * std::sin(p)};
  }
}

void OscillatorRing::derivative(const std::vector<std::complex<double>>& a,
                                const std::vector<double>& actions,
                                std::vector<std::complex<double>>& out) const {
  const int n = static_cast<int>(a.size());
  const std::complex<double> lin(params_.sigma, params_.omega);
  for (int i = 0; i < n; ++i) {
    const int left = (i + n - 1) % n;
    const int right = (i + 1) % n;
    const double mag2 = std::norm(a[i]);
    out[i] = lin * a[i] - params_.ell * mag2 * a[i] +
             params_.kappa * (a[left] + a[right] - 2.0 * a[i]) + params_.gain * actions[i];
  }
}

void OscillatorRing::step(const std::vector<double>& actions, double dt) {
  if (actions.size() != state_.size()) throw ConfigError("surrogate: action count mismatch");
  const int n = static_cast<int>(state_.size());
  derivative(state_, actions, k1_);
  for (int i = 0; i < n; ++i) tmp_[i] = state_[i] + 0.5 * dt * k1_[i];
  derivative(tmp_, actions, k2_);
  for (int i = 0; i < n; ++i) tmp_[i] = state_[i] + 0.5 * dt * k2_[i];
  derivative(tmp_, actions, k3_);
  for (int i = 0; i < n; ++i) tmp_[i] = state_[i] + dt * k3_[i];
  derivative(tmp_, actions, k4_);
  for (int i = 0; i < n; ++i) {
    state_[i] += dt / 6.0 * (k1_[i] + 2.0 * k2_[i] + 2.0 * k3_[i] + k4_[i]);
  }
}

void OscillatorRing::step_n(const std::vector<double>& actions, double dt, int n_substeps) {
  for (int s = 0; s < n_substeps; ++s) step(actions, dt);
}

double OscillatorRing::cd_syn(int i) const {
  return params_.cd0 + params_.c1 * std::norm(state_[i]);
}

double OscillatorRing::cl_syn(int i) const { return params_.c2 * state_[i].real(); }

std::vector<double> OscillatorRing::probes(int i, int n_probes) const {
  std::vector<double> out(n_probes);
  const double re = state_[i].real();
  const double im = state_[i].imag();
  const double mag2 = std::norm(state_[i]);
  for (int k = 0; k < n_probes; ++k) {
    switch (k % 3) {
      case 0: out[k] = re; break;
      case 1: out[k] = im; break;
      default: out[k] = mag2; break;
    }
  }
  return out;
}

}  // namespace afc::surrogate
