#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "afc/lbm/obstacle.hpp"

namespace afc::lbm {

struct ForceSample {
  double time = 0.0;  // convective units
  double cd = 0.0;
  double cl = 0.0;
};

// D2Q9 BGK lattice with fused collide-and-stream. Boundary handling:
// velocity inlet (Zou/He) and zero-gradient outlet in external mode,
// link-fraction (Bouzidi) bounce-back with half-way fallback on the
// obstacle, moving-wall terms on jet arcs. Forces come from momentum
// exchange over the boundary links each step.
class Lattice {
 public:
  Lattice(const FlowConfig& config, const ObstacleMask* mask);

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  std::uint64_t step_count() const { return step_count_; }
  const FlowConfig& config() const { return config_; }

  void init_uniform(double ux, double uy, double rho = 1.0);
  // Seeded smooth velocity perturbation (relative to U) to break symmetry.
  void add_seeded_perturbation(std::uint64_t seed, double relative_amplitude);

  // Advances n steps with the given per-pair front-jet velocities in
  // lattice units; throws DivergenceError when |u| reaches the lattice
  // sound speed.
  void step(int n, std::span<const double> front_jet_velocities = {});

  double density(int ix, int iy) const;
  std::array<double, 2> velocity(int ix, int iy) const;

  // Instantaneous momentum-exchange force of the last completed step,
  // normalized to (cd, cl) by 0.5*rho0*U^2*S.
  ForceSample force() const;
  double time_cu() const { return step_count_ * config_.inflow_speed / config_.chord_cells; }

  // Commanded volume flux of arc `a` (per unit amplitude link sum times
  // the applied arc velocity); the pair constraint makes front+rear
  // cancel exactly.
  double arc_flux(int arc, double front_velocity) const;
  // Rear arc velocity that exactly cancels the front arc's flux.
  double rear_velocity(int pair, double front_velocity) const;

  void save_snapshot(const std::filesystem::path& path) const;
  void load_snapshot(const std::filesystem::path& path);

  // Raw state access for tests and bitwise comparisons.
  const std::vector<double>& distributions() const { return f_; }
  // In-memory restart (same layout as distributions()).
  void restore_state(const std::vector<double>& f, std::uint64_t steps);

 private:
  void one_step(std::span<const double> front_jet_velocities);
  void apply_inlet_outlet();

  FlowConfig config_;
  const ObstacleMask* mask_;
  int nx_, ny_;
  std::size_t cells_;
  std::uint64_t step_count_ = 0;
  double omega_;

  // plane-major: f_[i * cells + idx]
  std::vector<double> f_, f_next_;
  // post-collision capture for cells the boundary pass needs
  std::vector<std::int32_t> capture_slot_;
  std::vector<double> capture_;
  std::size_t capture_count_ = 0;

  double last_fx_ = 0.0, last_fy_ = 0.0;
};

inline constexpr std::uint32_t kSnapshotVersion = 1;

}  // namespace afc::lbm
