#include "afc/lbm/obstacle.hpp"

#include <cmath>
#include <set>

namespace afc::lbm {

ObstacleKind obstacle_kind_from_name(const std::string& name) {
  if (name == "cylinder") return ObstacleKind::cylinder;
  if (name == "naca0012") return ObstacleKind::naca0012;
  throw ConfigError("unknown obstacle kind: " + name);
}

const char* obstacle_kind_name(ObstacleKind kind) {
  return kind == ObstacleKind::cylinder ? "cylinder" : "naca0012";
}

std::size_t ObstacleMask::solid_count() const {
  std::size_t n = 0;
  for (auto s : solid_) n += s;
  return n;
}

void ObstacleMask::rebuild_links_halfway() {
  links_.clear();
  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      if (is_solid(ix, iy)) continue;
      for (int i = 1; i < kQ; ++i) {
        const int jx = (ix + kCx[i] + nx_) % nx_;
        const int jy = (iy + kCy[i] + ny_) % ny_;
        if (!is_solid(jx, jy)) continue;
        BoundaryLink link{};
        link.fluid_idx = static_cast<std::int32_t>(idx(ix, iy));
        link.dir = static_cast<std::uint8_t>(i);
        link.q = 0.5f;
        link.jet = -1;
        const int ux = (ix - kCx[i] + nx_) % nx_;
        const int uy = (iy - kCy[i] + ny_) % ny_;
        link.up_idx = is_solid(ux, uy) ? -1 : static_cast<std::int32_t>(idx(ux, uy));
        links_.push_back(link);
      }
    }
  }
}

namespace geometry {

double naca0012_half_thickness(double u) {
  if (u < 0.0 || u > 1.0) return 0.0;
  const double s = std::sqrt(u);
  return 5.0 * 0.12 *
         (0.2969 * s - 0.1260 * u - 0.3516 * u * u + 0.2843 * u * u * u -
          0.1036 * u * u * u * u);
}

namespace {

struct AirfoilFrame {
  double cx, cy;      // rotation point in grid coords (quarter chord)
  double cos_a, sin_a;
  double chord;

  // grid -> airfoil (x along the chord from the leading edge, y up)
  void to_airfoil(double gx, double gy, double& ax, double& ay) const {
    const double dx = gx - cx;
    const double dy = gy - cy;
    ax = 0.25 * chord + dx * cos_a - dy * sin_a;
    ay = dx * sin_a + dy * cos_a;
  }
  void vec_to_grid(double ax, double ay, double& gx, double& gy) const {
    gx = ax * cos_a + ay * sin_a;
    gy = -ax * sin_a + ay * cos_a;
  }
};

AirfoilFrame make_frame(const FlowConfig& cfg) {
  const double a = cfg.aoa_deg * M_PI / 180.0;
  return {cfg.resolved_center_x(), cfg.resolved_center_y(), std::cos(a), std::sin(a),
          static_cast<double>(cfg.chord_cells)};
}

}  // namespace

bool point_inside(const FlowConfig& cfg, double x, double y) {
  if (cfg.obstacle == ObstacleKind::cylinder) {
    const double r = 0.5 * cfg.chord_cells;
    const double dx = x - cfg.resolved_center_x();
    const double dy = y - cfg.resolved_center_y();
    return dx * dx + dy * dy <= r * r;
  }
  const AirfoilFrame frame = make_frame(cfg);
  double ax, ay;
  frame.to_airfoil(x, y, ax, ay);
  if (ax < 0.0 || ax > frame.chord) return false;
  const double half = frame.chord * naca0012_half_thickness(ax / frame.chord);
  return std::abs(ay) <= half;
}

}  // namespace geometry

namespace {

// Wall crossing fraction along the link, by bisection on the analytic
// contour; the endpoints are fluid (outside) and solid (inside).
float link_fraction(const FlowConfig& cfg, double x0, double y0, double x1, double y1) {
  double lo = 0.0, hi = 1.0;
  for (int it = 0; it < 40; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double mx = x0 + mid * (x1 - x0);
    const double my = y0 + mid * (y1 - y0);
    if (geometry::point_inside(cfg, mx, my)) hi = mid;
    else lo = mid;
  }
  return static_cast<float>(0.5 * (lo + hi));
}

struct SurfaceInfo {
  double nrm_x, nrm_y;
  double param;        // cylinder: degrees from stagnation; naca: x/c
  bool upper;          // naca side
};

SurfaceInfo surface_info(const FlowConfig& cfg, double wx, double wy) {
  SurfaceInfo info{};
  if (cfg.obstacle == ObstacleKind::cylinder) {
    const double dx = wx - cfg.resolved_center_x();
    const double dy = wy - cfg.resolved_center_y();
    const double r = std::sqrt(dx * dx + dy * dy);
    info.nrm_x = dx / r;
    info.nrm_y = dy / r;
    // angle from the upstream stagnation point, positive toward the top
    info.param = std::atan2(dy, -dx) * 180.0 / M_PI;
    info.upper = dy >= 0.0;
    return info;
  }
  const double a = cfg.aoa_deg * M_PI / 180.0;
  const double cos_a = std::cos(a), sin_a = std::sin(a);
  const double dx = wx - cfg.resolved_center_x();
  const double dy = wy - cfg.resolved_center_y();
  const double chord = cfg.chord_cells;
  const double ax = 0.25 * chord + dx * cos_a - dy * sin_a;
  const double ay = dx * sin_a + dy * cos_a;
  const double u = std::min(1.0, std::max(0.0, ax / chord));
  info.param = u;
  info.upper = ay >= 0.0;
  // surface tangent from the thickness slope (central difference; robust
  // at the blunt leading edge where the analytic slope diverges)
  const double h = 1e-4;
  const double t0 = chord * geometry::naca0012_half_thickness(std::max(0.0, u - h));
  const double t1 = chord * geometry::naca0012_half_thickness(std::min(1.0, u + h));
  double slope = (t1 - t0) / (2.0 * h * chord);
  if (!info.upper) slope = -slope;
  // airfoil-frame outward normal
  double nx_af = -slope;
  double ny_af = info.upper ? 1.0 : -1.0;
  const double norm = std::sqrt(nx_af * nx_af + ny_af * ny_af);
  nx_af /= norm;
  ny_af /= norm;
  info.nrm_x = nx_af * cos_a + ny_af * sin_a;
  info.nrm_y = -nx_af * sin_a + ny_af * cos_a;
  return info;
}

// Signed angular distance in degrees, wrapped to [-180, 180).
double wrap_angle(double deg) {
  double w = std::fmod(deg + 180.0, 360.0);
  if (w < 0.0) w += 360.0;
  return w - 180.0;
}

int arc_membership(const FlowConfig& cfg, const SurfaceInfo& info) {
  for (std::size_t p = 0; p < cfg.jets.size(); ++p) {
    const JetArcDef* arcs[2] = {&cfg.jets[p].front, &cfg.jets[p].rear};
    for (int side = 0; side < 2; ++side) {
      const JetArcDef& arc = *arcs[side];
      bool member = false;
      if (cfg.obstacle == ObstacleKind::cylinder) {
        member = std::abs(wrap_angle(info.param - arc.position)) <= 0.5 * arc.width;
      } else {
        member = info.upper == arc.upper_surface &&
                 std::abs(info.param - arc.position) <= 0.5 * arc.width;
      }
      if (member) return static_cast<int>(2 * p + side);
    }
  }
  return -1;
}

}  // namespace

ObstacleMask build_obstacle(const FlowConfig& config) {
  const FlowConfig& cfg = config;
  cfg.validate();

  ObstacleMask mask(cfg.nx, cfg.ny);
  auto& solid = mask.solid();
  int min_x = cfg.nx, max_x = -1, min_y = cfg.ny, max_y = -1;
  for (int iy = 0; iy < cfg.ny; ++iy) {
    for (int ix = 0; ix < cfg.nx; ++ix) {
      if (geometry::point_inside(cfg, ix, iy)) {
        solid[mask.idx(ix, iy)] = 1;
        min_x = std::min(min_x, ix);
        max_x = std::max(max_x, ix);
        min_y = std::min(min_y, iy);
        max_y = std::max(max_y, iy);
      }
    }
  }
  if (max_x < 0) throw ConfigError("obstacle produced no solid cells");
  if (min_x < 2 || min_y < 2 || max_x > cfg.nx - 3 || max_y > cfg.ny - 3)
    throw ConfigError("obstacle does not fit in the grid with a safe margin");

  mask.jet_arcs().assign(2 * cfg.jets.size(), JetArcStats{});
  std::vector<std::set<std::int32_t>> arc_cells(2 * cfg.jets.size());

  auto& links = mask.links();
  for (int iy = 0; iy < cfg.ny; ++iy) {
    for (int ix = 0; ix < cfg.nx; ++ix) {
      if (mask.is_solid(ix, iy)) continue;
      for (int i = 1; i < kQ; ++i) {
        const int jx = ix + kCx[i];
        const int jy = iy + kCy[i];
        if (jx < 0 || jx >= cfg.nx || jy < 0 || jy >= cfg.ny) continue;
        if (!mask.is_solid(jx, jy)) continue;

        BoundaryLink link{};
        link.fluid_idx = static_cast<std::int32_t>(mask.idx(ix, iy));
        link.dir = static_cast<std::uint8_t>(i);
        link.q = link_fraction(cfg, ix, iy, jx, jy);
        if (link.q <= 0.0f) link.q = 0.5f;  // degenerate contour crossing

        const int ux = ix - kCx[i];
        const int uy = iy - kCy[i];
        const bool up_ok = ux >= 0 && ux < cfg.nx && uy >= 0 && uy < cfg.ny &&
                           !mask.is_solid(ux, uy);
        link.up_idx = up_ok ? static_cast<std::int32_t>(mask.idx(ux, uy)) : -1;

        const double wx = ix + link.q * kCx[i];
        const double wy = iy + link.q * kCy[i];
        const SurfaceInfo info = surface_info(cfg, wx, wy);
        link.nrm_x = static_cast<float>(info.nrm_x);
        link.nrm_y = static_cast<float>(info.nrm_y);
        link.surface_param = static_cast<float>(info.param);
        const int arc = arc_membership(cfg, info);
        link.jet = static_cast<std::int16_t>(arc);
        if (arc >= 0) {
          ++mask.jet_arcs()[arc].link_count;
          arc_cells[arc].insert(link.fluid_idx);
        }
        links.push_back(link);
      }
    }
  }

  for (std::size_t a = 0; a < arc_cells.size(); ++a) {
    mask.jet_arcs()[a].cell_count = static_cast<int>(arc_cells[a].size());
    if (mask.jet_arcs()[a].cell_count < 3) {
      throw ConfigError("jet arc " + std::to_string(a) +
                        " resolves to fewer than 3 boundary cells");
    }
  }
  return mask;
}

}  // namespace afc::lbm
