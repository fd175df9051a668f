#include "afc/lbm/lattice.hpp"

#include <cmath>
#include <cstring>

#include "afc/io_util.hpp"
#include "afc/rng.hpp"

namespace afc::lbm {

namespace {

inline void equilibrium(double rho, double ux, double uy, double* feq) {
  const double usq = 1.5 * (ux * ux + uy * uy);
  for (int i = 0; i < kQ; ++i) {
    const double cu = 3.0 * (kCx[i] * ux + kCy[i] * uy);
    feq[i] = kW[i] * rho * (1.0 + cu + 0.5 * cu * cu - usq);
  }
}

}  // namespace

Lattice::Lattice(const FlowConfig& config, const ObstacleMask* mask)
    : config_(config), mask_(mask), nx_(config.nx), ny_(config.ny),
      cells_(static_cast<std::size_t>(config.nx) * config.ny) {
  config_.validate();
  omega_ = 1.0 / config_.tau();
  f_.assign(cells_ * kQ, 0.0);
  f_next_.assign(cells_ * kQ, 0.0);

  // capture set: boundary-link cells and their upstream neighbours
  capture_slot_.assign(cells_, -1);
  if (mask_) {
    auto claim = [this](std::int32_t idx) {
      if (idx >= 0 && capture_slot_[idx] < 0)
        capture_slot_[idx] = static_cast<std::int32_t>(capture_count_++);
    };
    for (const auto& link : mask_->links()) {
      claim(link.fluid_idx);
      claim(link.up_idx);
    }
  }
  capture_.assign(capture_count_ * kQ, 0.0);
  init_uniform(0.0, 0.0);
}

void Lattice::init_uniform(double ux, double uy, double rho) {
  double feq[kQ];
  equilibrium(rho, ux, uy, feq);
  for (int i = 0; i < kQ; ++i) {
    double* plane = f_.data() + static_cast<std::size_t>(i) * cells_;
    for (std::size_t c = 0; c < cells_; ++c) plane[c] = feq[i];
  }
  step_count_ = 0;
  last_fx_ = last_fy_ = 0.0;
}

void Lattice::add_seeded_perturbation(std::uint64_t seed, double relative_amplitude) {
  if (relative_amplitude == 0.0) return;
  auto rng = make_rng(seed, "lbm-init");
  std::uniform_real_distribution<double> phase(0.0, 2.0 * M_PI);
  const double p1 = phase(rng), p2 = phase(rng), p3 = phase(rng);
  const double amp = relative_amplitude * config_.inflow_speed;
  double feq[kQ];
  for (int iy = 0; iy < ny_; ++iy) {
    for (int ix = 0; ix < nx_; ++ix) {
      const std::size_t c = static_cast<std::size_t>(iy) * nx_ + ix;
      if (mask_ && mask_->solid()[c]) continue;
      double rho = 0.0, mx = 0.0, my = 0.0;
      for (int i = 0; i < kQ; ++i) {
        const double v = f_[static_cast<std::size_t>(i) * cells_ + c];
        rho += v;
        mx += v * kCx[i];
        my += v * kCy[i];
      }
      const double ux = mx / rho +
                        amp * std::sin(2.0 * M_PI * (3.0 * iy) / ny_ + p1) *
                            std::sin(2.0 * M_PI * (2.0 * ix) / nx_ + p2);
      const double uy = my / rho +
                        amp * std::sin(2.0 * M_PI * (2.0 * iy) / ny_ + p3) *
                            std::sin(2.0 * M_PI * (3.0 * ix) / nx_ + p1);
      equilibrium(rho, ux, uy, feq);
      for (int i = 0; i < kQ; ++i) f_[static_cast<std::size_t>(i) * cells_ + c] = feq[i];
    }
  }
}

void Lattice::step(int n, std::span<const double> front_jet_velocities) {
  for (int s = 0; s < n; ++s) one_step(front_jet_velocities);
}

double Lattice::arc_flux(int arc, double velocity) const {
  if (!mask_ || arc < 0 || arc >= static_cast<int>(mask_->jet_arcs().size())) return 0.0;
  return velocity * mask_->jet_arcs()[arc].link_count;
}

double Lattice::rear_velocity(int pair, double front_velocity) const {
  if (!mask_) return -front_velocity;
  const auto& arcs = mask_->jet_arcs();
  const int f = 2 * pair, r = 2 * pair + 1;
  if (r >= static_cast<int>(arcs.size()) || arcs[r].link_count == 0) return -front_velocity;
  const double ratio =
      static_cast<double>(arcs[f].link_count) / static_cast<double>(arcs[r].link_count);
  return -front_velocity * ratio;
}

void Lattice::one_step(std::span<const double> front_jet_velocities) {
  const bool periodic_x = config_.boundary != BoundaryMode::external;
  const std::uint8_t* solid = mask_ ? mask_->solid().data() : nullptr;
  const double om = omega_;
  double max_u2 = 0.0;
  bool diverged = false;

  // per-plane neighbour offsets (wrapping handled explicitly at edges)
  for (int iy = 0; iy < ny_; ++iy) {
    const int ym = (iy - 1 + ny_) % ny_;
    const int yp = (iy + 1) % ny_;
    const std::size_t row = static_cast<std::size_t>(iy) * nx_;
    const std::size_t row_m = static_cast<std::size_t>(ym) * nx_;
    const std::size_t row_p = static_cast<std::size_t>(yp) * nx_;
    for (int ix = 0; ix < nx_; ++ix) {
      const std::size_t c = row + ix;
      if (solid && solid[c]) continue;

      double fv[kQ];
      for (int i = 0; i < kQ; ++i) fv[i] = f_[static_cast<std::size_t>(i) * cells_ + c];
      const double rho = fv[0] + fv[1] + fv[2] + fv[3] + fv[4] + fv[5] + fv[6] + fv[7] + fv[8];
      const double inv_rho = 1.0 / rho;
      const double ux = (fv[1] - fv[3] + fv[5] - fv[6] - fv[7] + fv[8]) * inv_rho;
      const double uy = (fv[2] - fv[4] + fv[5] + fv[6] - fv[7] - fv[8]) * inv_rho;
      const double u2 = ux * ux + uy * uy;
      if (!(u2 < kCs2)) diverged = true;  // also catches NaN
      if (u2 > max_u2) max_u2 = u2;

      const double usq = 1.5 * u2;
      double post[kQ];
      for (int i = 0; i < kQ; ++i) {
        const double cu = 3.0 * (kCx[i] * ux + kCy[i] * uy);
        const double feq = kW[i] * rho * (1.0 + cu + 0.5 * cu * cu - usq);
        post[i] = fv[i] + om * (feq - fv[i]);
      }

      const std::int32_t slot = capture_slot_[c];
      if (slot >= 0) {
        std::memcpy(capture_.data() + static_cast<std::size_t>(slot) * kQ, post,
                    sizeof(post));
      }

      // scatter
      const int xm = ix - 1, xp = ix + 1;
      f_next_[c] = post[0];
      auto push = [&](int i, int tx, std::size_t trow) {
        if (tx < 0 || tx >= nx_) {
          if (!periodic_x) return;
          tx = (tx + nx_) % nx_;
        }
        const std::size_t t = trow + tx;
        if (solid && solid[t]) return;
        f_next_[static_cast<std::size_t>(i) * cells_ + t] = post[i];
      };
      push(1, xp, row);
      push(2, ix, row_p);
      push(3, xm, row);
      push(4, ix, row_m);
      push(5, xp, row_p);
      push(6, xm, row_p);
      push(7, xm, row_m);
      push(8, xp, row_m);
    }
  }

  if (diverged) {
    throw DivergenceError(step_count_,
                          "lattice diverged at step " + std::to_string(step_count_) +
                              " (max |u|^2 = " + std::to_string(max_u2) + ")");
  }

  // bounce-back over boundary links, with momentum exchange
  double fx = 0.0, fy = 0.0;
  if (mask_) {
    const double rho0 = 1.0;
    for (const auto& link : mask_->links()) {
      const int i = link.dir;
      const int io = kOpp[i];
      const double* pc = capture_.data() +
                         static_cast<std::size_t>(capture_slot_[link.fluid_idx]) * kQ;
      double uwx = 0.0, uwy = 0.0;
      if (link.jet >= 0 && !front_jet_velocities.empty()) {
        const int pair = link.jet / 2;
        const double vel = (link.jet % 2 == 0)
                               ? front_jet_velocities[pair]
                               : rear_velocity(pair, front_jet_velocities[pair]);
        uwx = vel * link.nrm_x;
        uwy = vel * link.nrm_y;
      }
      const double cw = kCx[i] * uwx + kCy[i] * uwy;
      const double q = link.q;
      double val;
      if (link.up_idx >= 0 && q < 0.5f) {
        const double* pu = capture_.data() +
                           static_cast<std::size_t>(capture_slot_[link.up_idx]) * kQ;
        val = 2.0 * q * pc[i] + (1.0 - 2.0 * q) * pu[i] - 6.0 * kW[i] * rho0 * cw;
      } else if (q > 0.5f) {
        const double inv2q = 1.0 / (2.0 * q);
        val = inv2q * pc[i] + (2.0 * q - 1.0) * inv2q * pc[io] -
              (3.0 * kW[i] * rho0 / q) * cw;
      } else {
        val = pc[i] - 6.0 * kW[i] * rho0 * cw;
      }
      f_next_[static_cast<std::size_t>(io) * cells_ + link.fluid_idx] = val;
      fx += kCx[i] * (pc[i] + val);
      fy += kCy[i] * (pc[i] + val);
    }
  }

  f_.swap(f_next_);

  if (config_.boundary == BoundaryMode::external) apply_inlet_outlet();

  last_fx_ = fx;
  last_fy_ = fy;
  ++step_count_;
}

void Lattice::apply_inlet_outlet() {
  const double u = config_.inflow_speed;
  // Zou/He velocity inlet on the left edge
  for (int iy = 0; iy < ny_; ++iy) {
    const std::size_t c = static_cast<std::size_t>(iy) * nx_;
    const double f0 = f_[0 * cells_ + c];
    const double f2 = f_[2 * cells_ + c];
    const double f3 = f_[3 * cells_ + c];
    const double f4 = f_[4 * cells_ + c];
    const double f6 = f_[6 * cells_ + c];
    const double f7 = f_[7 * cells_ + c];
    const double rho = (f0 + f2 + f4 + 2.0 * (f3 + f6 + f7)) / (1.0 - u);
    f_[1 * cells_ + c] = f3 + (2.0 / 3.0) * rho * u;
    f_[5 * cells_ + c] = f7 - 0.5 * (f2 - f4) + (1.0 / 6.0) * rho * u;
    f_[8 * cells_ + c] = f6 + 0.5 * (f2 - f4) + (1.0 / 6.0) * rho * u;
  }
  // zero-gradient outlet on the right edge: copy the inbound populations
  for (int iy = 0; iy < ny_; ++iy) {
    const std::size_t c = static_cast<std::size_t>(iy) * nx_ + (nx_ - 1);
    const std::size_t s = c - 1;
    f_[3 * cells_ + c] = f_[3 * cells_ + s];
    f_[6 * cells_ + c] = f_[6 * cells_ + s];
    f_[7 * cells_ + c] = f_[7 * cells_ + s];
  }
}

double Lattice::density(int ix, int iy) const {
  const std::size_t c = static_cast<std::size_t>(iy) * nx_ + ix;
  double rho = 0.0;
  for (int i = 0; i < kQ; ++i) rho += f_[static_cast<std::size_t>(i) * cells_ + c];
  return rho;
}

std::array<double, 2> Lattice::velocity(int ix, int iy) const {
  const std::size_t c = static_cast<std::size_t>(iy) * nx_ + ix;
  double rho = 0.0, mx = 0.0, my = 0.0;
  for (int i = 0; i < kQ; ++i) {
    const double v = f_[static_cast<std::size_t>(i) * cells_ + c];
    rho += v;
    mx += v * kCx[i];
    my += v * kCy[i];
  }
  return {mx / rho, my / rho};
}

ForceSample Lattice::force() const {
  const double u = config_.inflow_speed;
  const double denom = 0.5 * 1.0 * u * u * config_.ref_surface();
  return {time_cu(), last_fx_ / denom, last_fy_ / denom};
}

void Lattice::restore_state(const std::vector<double>& f, std::uint64_t steps) {
  if (f.size() != f_.size()) throw ConfigError("lattice restore: state size mismatch");
  f_ = f;
  step_count_ = steps;
  last_fx_ = last_fy_ = 0.0;
}

void Lattice::save_snapshot(const std::filesystem::path& path) const {
  std::vector<std::uint8_t> buf;
  buf.reserve(20 + cells_ * kQ * 8);
  const char magic[4] = {'A', 'F', 'C', 'S'};
  buf.insert(buf.end(), magic, magic + 4);
  put_u32(buf, kSnapshotVersion);
  put_u32(buf, static_cast<std::uint32_t>(nx_));
  put_u32(buf, static_cast<std::uint32_t>(ny_));
  put_u64(buf, step_count_);
  for (std::size_t c = 0; c < cells_; ++c) {
    for (int i = 0; i < kQ; ++i) put_f64(buf, f_[static_cast<std::size_t>(i) * cells_ + c]);
  }
  write_binary_file(path, buf);
}

void Lattice::load_snapshot(const std::filesystem::path& path) {
  const auto buf = read_binary_file(path);
  ByteReader r{buf.data(), buf.size()};
  if (r.bytes(4, "magic") != "AFCS")
    throw IoError("corrupt snapshot (bad magic): " + path.string());
  const std::uint32_t version = r.u32("version");
  if (version != kSnapshotVersion)
    throw IoError("snapshot version mismatch in " + path.string());
  const std::uint32_t fnx = r.u32("nx");
  const std::uint32_t fny = r.u32("ny");
  if (fnx != static_cast<std::uint32_t>(nx_) || fny != static_cast<std::uint32_t>(ny_))
    throw ConfigError("snapshot grid mismatch: file " + std::to_string(fnx) + "x" +
                      std::to_string(fny));
  step_count_ = r.u64("step count");
  for (std::size_t c = 0; c < cells_; ++c) {
    for (int i = 0; i < kQ; ++i)
      f_[static_cast<std::size_t>(i) * cells_ + c] = r.f64("distribution");
  }
  if (!r.exhausted()) throw IoError("corrupt snapshot (trailing bytes): " + path.string());
  last_fx_ = last_fy_ = 0.0;
}

}  // namespace afc::lbm
