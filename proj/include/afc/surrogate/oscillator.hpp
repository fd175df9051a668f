#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "afc/errors.hpp"

namespace afc::surrogate {

// Ring of coupled Stuart-Landau oscillators, one per pseudo-environment
// strip. Each strip mimics the shedding of its slice of span: unforced it
// settles on the limit cycle |A| = sqrt(sigma/ell); a real control forcing
// enters additively. Synthetic coefficients expose the state the same way
// the flow env exposes forces:
//   cd_syn = cd0 + c1*|A|^2,  cl_syn = c2*Re(A).
struct OscillatorParams {
  double sigma = 0.1;     // linear growth rate
  double ell = 0.1;       // cubic saturation, > 0
  double omega = 2.0 * 3.14159265358979323846 * 0.2;
  double kappa = 0.05;    // ring coupling, >= 0
  double gain = 0.1;      // control gain
  double cd0 = 1.0;
  double c1 = 1.0;
  double c2 = 1.0;
  double dt = 0.025;      // integrator step, dt*omega < 0.1

  void validate() const {
    if (!(ell > 0.0)) throw ConfigError("surrogate: ell must be > 0");
    if (kappa < 0.0) throw ConfigError("surrogate: kappa must be >= 0");
    if (!(dt > 0.0) || dt * omega >= 0.1)
      throw ConfigError("surrogate: need dt > 0 and dt*omega < 0.1");
  }

  double limit_cycle_radius() const { return std::sqrt(sigma / ell); }
  double shedding_period() const { return 2.0 * 3.14159265358979323846 / omega; }
};

class OscillatorRing {
 public:
  OscillatorRing(int n_strips, const OscillatorParams& params);

  int strips() const { return static_cast<int>(state_.size()); }
  const OscillatorParams& params() const { return params_; }

  std::vector<std::complex<double>>& state() { return state_; }
  const std::vector<std::complex<double>>& state() const { return state_; }

  // Limit-cycle amplitudes with per-strip phases drawn from the seed.
  void init_random_phases(std::uint64_t seed);

  // One RK4 step of dA_i/dt = (sigma + i*omega)A_i - ell|A_i|^2 A_i
  //   + kappa (A_{i-1} + A_{i+1} - 2 A_i) + gain*u_i.
  void step(const std::vector<double>& actions, double dt);
  void step_n(const std::vector<double>& actions, double dt, int n_substeps);

  double cd_syn(int i) const;
  double cl_syn(int i) const;

  // Deterministic feature map of strip i onto an n_probes vector, cycling
  // {Re A, Im A, |A|^2} so the observation width matches the flow case.
  std::vector<double> probes(int i, int n_probes) const;

 private:
  void derivative(const std::vector<std::complex<double>>& a,
                  const std::vector<double>& actions,
                  std::vector<std::complex<double>>& out) const;

  OscillatorParams params_;
  std::vector<std::complex<double>> state_;
  mutable std::vector<std::complex<double>> k1_, k2_, k3_, k4_, tmp_;
};

}  // namespace afc::surrogate
