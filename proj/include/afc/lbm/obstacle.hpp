#pragma once

#include <cstdint>
#include <vector>

#include "afc/lbm/flow_config.hpp"

namespace afc::lbm {

// D2Q9 stencil shared by the mask builder and the solver.
inline constexpr int kQ = 9;
inline constexpr int kCx[kQ] = {0, 1, 0, -1, 0, 1, -1, -1, 1};
inline constexpr int kCy[kQ] = {0, 0, 1, 0, -1, 1, 1, -1, -1};
inline constexpr int kOpp[kQ] = {0, 3, 4, 1, 2, 7, 8, 5, 6};
inline constexpr double kW[kQ] = {4.0 / 9.0,  1.0 / 9.0,  1.0 / 9.0,
                                  1.0 / 9.0,  1.0 / 9.0,  1.0 / 36.0,
                                  1.0 / 36.0, 1.0 / 36.0, 1.0 / 36.0};
inline constexpr double kCs2 = 1.0 / 3.0;

// One fluid->solid lattice link. `q` is the fraction of the link length
// at which the wall is crossed, in (0, 1]. `up_idx` is the next fluid
// cell opposite the link (for the interpolated bounce-back), -1 when it
// is unavailable and the half-way rule is used instead.
struct BoundaryLink {
  std::int32_t fluid_idx;
  std::int32_t up_idx;
  std::uint8_t dir;
  float q;
  std::int16_t jet;  // jet arc id, -1 for plain walls
  float nrm_x, nrm_y;  // outward surface normal at the wall point
  float surface_param;  // cylinder: angle from stagnation (deg); naca: x/c
};

struct JetArcStats {
  int link_count = 0;
  int cell_count = 0;
};

// Solid mask plus the boundary-link and jet-arc tables the solver needs.
class ObstacleMask {
 public:
  ObstacleMask() = default;
  ObstacleMask(int nx, int ny) : nx_(nx), ny_(ny), solid_(static_cast<std::size_t>(nx) * ny, 0) {}

  int nx() const { return nx_; }
  int ny() const { return ny_; }
  bool is_solid(int ix, int iy) const { return solid_[idx(ix, iy)] != 0; }
  const std::vector<std::uint8_t>& solid() const { return solid_; }
  std::vector<std::uint8_t>& solid() { return solid_; }
  std::size_t idx(int ix, int iy) const { return static_cast<std::size_t>(iy) * nx_ + ix; }

  const std::vector<BoundaryLink>& links() const { return links_; }
  std::vector<BoundaryLink>& links() { return links_; }
  // arc id 2*pair for front, 2*pair+1 for rear
  const std::vector<JetArcStats>& jet_arcs() const { return jet_arcs_; }
  std::vector<JetArcStats>& jet_arcs() { return jet_arcs_; }

  std::size_t solid_count() const;

  // Rebuilds the link table from the solid grid with half-way q. Used by
  // tests that assemble channel walls or ad-hoc geometry directly.
  void rebuild_links_halfway();

 private:
  int nx_ = 0, ny_ = 0;
  std::vector<std::uint8_t> solid_;
  std::vector<BoundaryLink> links_;
  std::vector<JetArcStats> jet_arcs_;
};

// Builds the mask for the configured obstacle: solid flags from the
// analytic contour, link-fraction q by bisection against it, and the jet
// arc tagging with outward normals. Throws ConfigError when the obstacle
// does not fit or a jet arc resolves to fewer than 3 boundary cells.
ObstacleMask build_obstacle(const FlowConfig& config);

// Analytic helpers, exposed for the geometry tests.
namespace geometry {
// closed-trailing-edge 4-digit thickness polynomial, t = 0.12
double naca0012_half_thickness(double x_over_c);
bool point_inside(const FlowConfig& config, double x, double y);
}  // namespace geometry

}  // namespace afc::lbm
