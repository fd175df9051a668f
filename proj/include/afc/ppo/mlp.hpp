#pragma once

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "afc/errors.hpp"

namespace afc::ppo {

// Fully connected net with two tanh hidden layers and a scalar linear
// output: [in, H, H, 1]. Parameters live in one flat vector (layout
// W1, b1, W2, b2, W3, b3) so the optimizer, finite-difference checks and
// checkpoints can treat them uniformly. Gradients are hand-written
// reverse mode for this fixed topology.
class Mlp {
 public:
  Mlp(int in_dim, int hidden);

  int in_dim() const { return in_; }
  int hidden() const { return h_; }
  std::size_t param_count() const { return params_.size(); }
  std::vector<double>& params() { return params_; }
  const std::vector<double>& params() const { return params_; }

  // Standard fan-in scaled uniform init; final layer shrunk so initial
  // outputs are near zero.
  void init(std::mt19937_64& rng, double out_scale = 0.01);

  struct Cache {
    std::vector<double> x, z1, a1, z2, a2;
  };

  double forward(std::span<const double> x) const;
  double forward(std::span<const double> x, Cache& cache) const;

  // Accumulates dL/dparams into grad (same layout as params) given
  // dL/d(output). `grad` must have param_count() entries.
  void backward(const Cache& cache, double dout, std::span<double> grad) const;

 private:
  int in_ = 0;
  int h_ = 0;
  std::vector<double> params_;

  // flat layout offsets
  std::size_t w1_ = 0, b1_ = 0, w2_ = 0, b2_ = 0, w3_ = 0, b3_ = 0;
};

}  // namespace afc::ppo
