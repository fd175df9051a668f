#pragma once

#include <cmath>
#include <string>
#include <vector>

#include "afc/errors.hpp"

namespace afc::lbm {

enum class ObstacleKind { cylinder, naca0012 };

enum class BoundaryMode {
  external,  // velocity inlet at x=0, zero-gradient outlet at x=nx-1, periodic in y
  channel,   // periodic in x; walls, if any, come from the mask
  periodic,  // fully periodic
};

// One jet arc on the obstacle surface.
//  - cylinder: `position`/`width` are angles in degrees measured from the
//    upstream stagnation point, positive toward the top.
//  - naca0012: `position`/`width` are chordwise stations as fractions of
//    the chord; `upper_surface` picks the side.
struct JetArcDef {
  double position = 0.0;
  double width = 0.0;
  bool upper_surface = true;
};

// Front/rear arcs operate with opposite mass flow (zero net flux).
struct JetPairDef {
  JetArcDef front;
  JetArcDef rear;
};

struct FlowConfig {
  double reynolds = 100.0;
  double inflow_speed = 0.1;  // lattice units; incompressibility proxy
  int chord_cells = 64;
  int nx = 0;
  int ny = 0;
  double aoa_deg = 0.0;
  ObstacleKind obstacle = ObstacleKind::cylinder;
  BoundaryMode boundary = BoundaryMode::external;
  // obstacle reference point (cylinder center / quarter chord); negative = default
  double center_x = -1.0;
  double center_y = -1.0;
  std::vector<JetPairDef> jets;
  int n_probes = 32;
  double init_perturbation = 1e-3;  // relative seeded velocity noise at init

  double viscosity() const { return inflow_speed * chord_cells / reynolds; }
  double tau() const { return 3.0 * viscosity() + 0.5; }
  // lattice steps per convective unit c/U
  double steps_per_cu() const { return chord_cells / inflow_speed; }
  double ref_surface() const { return static_cast<double>(chord_cells); }

  double resolved_center_x() const {
    return center_x >= 0.0 ? center_x : 2.5 * chord_cells;
  }
  double resolved_center_y() const {
    return center_y >= 0.0 ? center_y : 0.5 * (ny - 1);
  }

  void apply_default_jets() {
    if (!jets.empty()) return;
    JetPairDef pair;
    if (obstacle == ObstacleKind::cylinder) {
      pair.front = {90.0, 10.0, true};
      pair.rear = {-90.0, 10.0, false};
    } else {
      pair.front = {0.01, 0.05, true};
      pair.rear = {0.40, 0.05, true};
    }
    jets.push_back(pair);
  }

  void validate() const {
    if (!(inflow_speed > 0.0 && inflow_speed <= 0.15))
      throw ConfigError("lbm: inflow_speed must be in (0, 0.15]");
    if (chord_cells < 32) throw ConfigError("lbm: chord_cells must be >= 32");
    if (nx < 3 || ny < 3) throw ConfigError("lbm: grid too small");
    if (!(reynolds > 0.0)) throw ConfigError("lbm: reynolds must be > 0");
    if (!(tau() > 0.5)) throw ConfigError("lbm: relaxation time must exceed 0.5");
    if (boundary == BoundaryMode::external) {
      const double upstream = resolved_center_x() - 0.5 * chord_cells;
      if (upstream < 2.0 * chord_cells)
        throw ConfigError("lbm: obstacle needs >= 2 chords of upstream margin");
    }
  }
};

ObstacleKind obstacle_kind_from_name(const std::string& name);
const char* obstacle_kind_name(ObstacleKind kind);

}  // namespace afc::lbm
