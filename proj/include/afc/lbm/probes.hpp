#pragma once

#include <vector>

#include "afc/lbm/lattice.hpp"

namespace afc::lbm {

// Fixed witness-point layout: a ring around the obstacle plus a wake
// rake behind it, deterministic given the flow config. Sampled quantity
// is the pressure proxy cs^2 * (rho - rho0).
class ProbeSet {
 public:
  ProbeSet() = default;
  ProbeSet(const FlowConfig& config, const ObstacleMask& mask);

  int count() const { return static_cast<int>(cells_.size()); }
  const std::vector<std::pair<int, int>>& cells() const { return cells_; }

  std::vector<double> sample(const Lattice& lattice) const;

 private:
  std::vector<std::pair<int, int>> cells_;
};

}  // namespace afc::lbm
