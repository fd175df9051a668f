#include "afc/run/spectrum.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

namespace afc::run {

namespace {

// iterative radix-2 FFT
void fft(std::vector<std::complex<double>>& a) {
  const std::size_t n = a.size();
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = -2.0 * M_PI / static_cast<double>(len);
    const std::complex<double> wl(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      std::complex<double> w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const std::complex<double> u = a[i + k];
        const std::complex<double> v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace

SpectrumResult compute_spectrum(std::span<const double> signal, double dt,
                                const SpectrumOptions& options) {
  const std::size_t n = signal.size();
  if (n < 64) throw ConfigError("spectrum: signal must have at least 64 samples");
  if (!(dt > 0.0)) throw ConfigError("spectrum: dt must be positive");

  double mean = 0.0;
  for (double v : signal) mean += v;
  mean /= static_cast<double>(n);

  std::vector<double> window(n, 1.0);
  if (options.taper == Taper::hann) {
    for (std::size_t k = 0; k < n; ++k) {
      window[k] = 0.5 * (1.0 - std::cos(2.0 * M_PI * k / (n - 1)));
    }
  }
  double wsum2 = 0.0;
  for (double w : window) wsum2 += w * w;

  const std::size_t npad = next_pow2(n);
  std::vector<std::complex<double>> a(npad, {0.0, 0.0});
  double weighted_var = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    const double y = window[k] * (signal[k] - mean);
    a[k] = {y, 0.0};
    weighted_var += y * y;
  }
  weighted_var /= wsum2;
  fft(a);

  SpectrumResult out;
  const std::size_t nbins = npad / 2 + 1;
  out.frequencies.resize(nbins);
  out.power.resize(nbins);
  // one-sided power normalized so the bins sum to the weighted variance
  for (std::size_t k = 0; k < nbins; ++k) {
    out.frequencies[k] = static_cast<double>(k) / (static_cast<double>(npad) * dt);
    double p = std::norm(a[k]) / (static_cast<double>(npad) * wsum2);
    const bool shared = k == 0 || (npad % 2 == 0 && k == npad / 2);
    if (!shared) p *= 2.0;
    out.power[k] = p;
    out.total_power += p;
  }
  out.variance = weighted_var;

  // noise floor from the median of the non-DC bins
  std::vector<double> sorted(out.power.begin() + 1, out.power.end());
  std::sort(sorted.begin(), sorted.end());
  const double median = sorted[sorted.size() / 2];

  std::size_t peak = 1;
  for (std::size_t k = 2; k + 1 < nbins; ++k) {
    if (out.power[k] > out.power[peak]) peak = k;
  }
  out.peak_power = out.power[peak];
  if (median > 0.0 && out.peak_power < options.peak_floor_ratio * median) {
    out.has_peak = false;
    return out;
  }
  if (out.peak_power <= 0.0) {
    out.has_peak = false;
    return out;
  }

  // parabolic refinement on log power
  double f_peak = out.frequencies[peak];
  if (peak > 1 && peak + 1 < nbins) {
    const double eps = 1e-300;
    const double l0 = std::log(out.power[peak - 1] + eps);
    const double l1 = std::log(out.power[peak] + eps);
    const double l2 = std::log(out.power[peak + 1] + eps);
    const double denom = l0 - 2.0 * l1 + l2;
    if (denom < 0.0) {
      const double shift = 0.5 * (l0 - l2) / denom;
      if (std::abs(shift) <= 1.0)
        f_peak += shift * (out.frequencies[1] - out.frequencies[0]);
    }
  }
  out.has_peak = true;
  out.peak_frequency = f_peak;
  out.strouhal = f_peak * options.chord / options.u_inf;
  return out;
}

SpectrumResult require_peak(std::span<const double> signal, double dt,
                            const SpectrumOptions& options) {
  SpectrumResult spec = compute_spectrum(signal, dt, options);
  if (!spec.has_peak)
    throw WorkerError("no spectral peak above the noise floor (flat or broadband signal)");
  return spec;
}

bool single_dominant_peak(const SpectrumResult& spec, double dominance_ratio) {
  if (!spec.has_peak) return false;
  // locate the peak bin
  std::size_t peak = 1;
  for (std::size_t k = 2; k < spec.power.size(); ++k) {
    if (spec.power[k] > spec.power[peak]) peak = k;
  }
  const double df = spec.frequencies[1] - spec.frequencies[0];
  double second = 0.0;
  for (std::size_t k = 1; k + 1 < spec.power.size(); ++k) {
    if (spec.power[k] <= spec.power[k - 1] || spec.power[k] <= spec.power[k + 1]) continue;
    // skip the main peak's neighbourhood and its harmonics
    const double f = spec.frequencies[k];
    const double ratio = f / spec.peak_frequency;
    const double nearest = std::round(ratio);
    if (std::abs(f - spec.frequencies[peak]) <= 3.0 * df) continue;
    if (nearest >= 1.0 && std::abs(ratio - nearest) * spec.peak_frequency <= 3.0 * df)
      continue;
    second = std::max(second, spec.power[k]);
  }
  return spec.peak_power >= dominance_ratio * std::max(second, 1e-300);
}

}  // namespace afc::run
