#pragma once

#include <memory>
#include <vector>

namespace afc::env {

struct PeForces {
  double cd = 0.0;
  double cl = 0.0;
};

// Control-loop view of a flow or surrogate simulation. One instance per
// worker; never shared between threads. Amplitudes everywhere are the
// dimensionless front-jet values (U_jet / U_inf), one per pseudo-env.
class Environment {
 public:
  virtual ~Environment() = default;

  virtual int pseudo_envs() const = 0;
  virtual int probes_per_pe() const = 0;

  // One solver substep duration in convective units.
  virtual double dt_cu() const = 0;

  // Cold start from the configured initial condition.
  virtual void init_cold(std::uint64_t seed) = 0;
  // Snapshot of the current state as the baseline restart point.
  virtual void capture_baseline() = 0;
  // Restore the captured baseline state.
  virtual void reset() = 0;

  virtual std::vector<double> sample_probes(int pe) const = 0;

  // Advance one substep with the given amplitudes (may throw
  // DivergenceError for the flow env).
  virtual void substep(const std::vector<double>& amplitudes) = 0;

  // Instantaneous per-pseudo-env force coefficients after the last substep.
  virtual std::vector<PeForces> forces() const = 0;

  virtual double time_cu() const = 0;
};

}  // namespace afc::env
