#include "afc/lbm/probes.hpp"

#include <cmath>

namespace afc::lbm {

ProbeSet::ProbeSet(const FlowConfig& config, const ObstacleMask& mask) {
  const int n = config.n_probes;
  if (n < 1) throw ConfigError("probes: n_probes must be >= 1");
  const double cx = config.resolved_center_x();
  const double cy = config.resolved_center_y();
  const double c = config.chord_cells;

  const int n_ring = n / 2;
  const int n_wake = n - n_ring;

  auto add = [&](double x, double y) {
    int ix = static_cast<int>(std::lround(x));
    int iy = static_cast<int>(std::lround(y));
    if (ix < 0 || ix >= config.nx || iy < 0 || iy >= config.ny)
      throw ConfigError("probe outside the grid; enlarge the domain");
    if (mask.is_solid(ix, iy)) {
      // nudge outward along the ray from the obstacle centre
      const double dx = x - cx, dy = y - cy;
      const double len = std::max(1.0, std::sqrt(dx * dx + dy * dy));
      for (int k = 1; k <= 8 && mask.is_solid(ix, iy); ++k) {
        ix = static_cast<int>(std::lround(x + k * dx / len));
        iy = static_cast<int>(std::lround(y + k * dy / len));
        if (ix < 0 || ix >= config.nx || iy < 0 || iy >= config.ny)
          throw ConfigError("probe outside the grid; enlarge the domain");
      }
      if (mask.is_solid(ix, iy)) throw ConfigError("probe could not be placed in fluid");
    }
    cells_.emplace_back(ix, iy);
  };

  // ring slightly outside the profile
  const double r_ring = 0.85 * c;
  for (int k = 0; k < n_ring; ++k) {
    const double theta = 2.0 * M_PI * k / n_ring;
    add(cx + r_ring * std::cos(theta), cy + r_ring * std::sin(theta));
  }
  // wake rake: columns of 4 from 1.2c to 3c downstream
  const int rows = 4;
  const int cols = (n_wake + rows - 1) / rows;
  int placed = 0;
  for (int col = 0; col < cols && placed < n_wake; ++col) {
    const double x = cx + (1.2 + 1.8 * (cols == 1 ? 0.0 : static_cast<double>(col) / (cols - 1))) * c;
    for (int rowi = 0; rowi < rows && placed < n_wake; ++rowi) {
      const double y = cy + (-0.3 + 0.2 * rowi) * c;
      add(x, y);
      ++placed;
    }
  }
}

std::vector<double> ProbeSet::sample(const Lattice& lattice) const {
  std::vector<double> out;
  out.reserve(cells_.size());
  for (const auto& [ix, iy] : cells_) {
    out.push_back(kCs2 * (lattice.density(ix, iy) - 1.0));
  }
  return out;
}

}  // namespace afc::lbm
