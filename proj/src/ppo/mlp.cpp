#include "afc/ppo/mlp.hpp"

#include <cmath>

namespace afc::ppo {

Mlp::Mlp(int in_dim, int hidden) : in_(in_dim), h_(hidden) {
  if (in_dim < 1 || hidden < 1) throw ConfigError("mlp: dimensions must be positive");
  w1_ = 0;
  b1_ = w1_ + static_cast<std::size_t>(h_) * in_;
  w2_ = b1_ + h_;
  b2_ = w2_ + static_cast<std::size_t>(h_) * h_;
  w3_ = b2_ + h_;
  b3_ = w3_ + h_;
  params_.assign(b3_ + 1, 0.0);
}

void Mlp::init(std::mt19937_64& rng, double out_scale) {
  auto fanin_uniform = [&rng](std::span<double> w, int fan_in, double gain) {
    const double bound = gain / std::sqrt(static_cast<double>(fan_in));
    std::uniform_real_distribution<double> dist(-bound, bound);
    for (double& v : w) v = dist(rng);
  };
  std::span<double> p(params_);
  fanin_uniform(p.subspan(w1_, static_cast<std::size_t>(h_) * in_), in_, 1.0);
  fanin_uniform(p.subspan(b1_, h_), in_, 1.0);
  fanin_uniform(p.subspan(w2_, static_cast<std::size_t>(h_) * h_), h_, 1.0);
  fanin_uniform(p.subspan(b2_, h_), h_, 1.0);
  fanin_uniform(p.subspan(w3_, h_), h_, out_scale);
  params_[b3_] = 0.0;
}

double Mlp::forward(std::span<const double> x) const {
  Cache cache;
  return forward(x, cache);
}

double Mlp::forward(std::span<const double> x, Cache& cache) const {
  if (static_cast<int>(x.size()) != in_) throw ConfigError("mlp: input dimension mismatch");
  cache.x.assign(x.begin(), x.end());
  cache.z1.assign(h_, 0.0);
  cache.a1.assign(h_, 0.0);
  cache.z2.assign(h_, 0.0);
  cache.a2.assign(h_, 0.0);

  const double* W1 = params_.data() + w1_;
  const double* B1 = params_.data() + b1_;
  const double* W2 = params_.data() + w2_;
  const double* B2 = params_.data() + b2_;
  const double* W3 = params_.data() + w3_;

  for (int j = 0; j < h_; ++j) {
    double z = B1[j];
    const double* row = W1 + static_cast<std::size_t>(j) * in_;
    for (int k = 0; k < in_; ++k) z += row[k] * x[k];
    cache.z1[j] = z;
    cache.a1[j] = std::tanh(z);
  }
  for (int j = 0; j < h_; ++j) {
    double z = B2[j];
    const double* row = W2 + static_cast<std::size_t>(j) * h_;
    for (int k = 0; k < h_; ++k) z += row[k] * cache.a1[k];
    cache.z2[j] = z;
    cache.a2[j] = std::tanh(z);
  }
  double out = params_[b3_];
  for (int j = 0; j < h_; ++j) out += W3[j] * cache.a2[j];
  return out;
}

void Mlp::backward(const Cache& cache, double dout, std::span<double> grad) const {
  const double* W2 = params_.data() + w2_;
  const double* W3 = params_.data() + w3_;
  double* gW1 = grad.data() + w1_;
  double* gB1 = grad.data() + b1_;
  double* gW2 = grad.data() + w2_;
  double* gB2 = grad.data() + b2_;
  double* gW3 = grad.data() + w3_;

  grad[b3_] += dout;
  std::vector<double> da2(h_), da1(h_);
  for (int j = 0; j < h_; ++j) {
    gW3[j] += dout * cache.a2[j];
    da2[j] = dout * W3[j];
  }
  // through tanh of layer 2
  for (int j = 0; j < h_; ++j) {
    const double dz2 = da2[j] * (1.0 - cache.a2[j] * cache.a2[j]);
    gB2[j] += dz2;
    double* row = gW2 + static_cast<std::size_t>(j) * h_;
    for (int k = 0; k < h_; ++k) row[k] += dz2 * cache.a1[k];
    da2[j] = dz2;  // reuse as dz2
  }
  for (int k = 0; k < h_; ++k) {
    double acc = 0.0;
    for (int j = 0; j < h_; ++j) acc += da2[j] * W2[static_cast<std::size_t>(j) * h_ + k];
    da1[k] = acc;
  }
  for (int j = 0; j < h_; ++j) {
    const double dz1 = da1[j] * (1.0 - cache.a1[j] * cache.a1[j]);
    gB1[j] += dz1;
    double* row = gW1 + static_cast<std::size_t>(j) * in_;
    for (int k = 0; k < in_; ++k) row[k] += dz1 * cache.x[k];
  }
}

}  // namespace afc::ppo
