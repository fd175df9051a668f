#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "afc/errors.hpp"

namespace afc::run {

enum class Taper { rectangular, hann };

struct SpectrumResult {
  std::vector<double> frequencies;  // 1/time-unit of the input
  std::vector<double> power;        // sums to the (window-weighted) variance
  double total_power = 0.0;
  double variance = 0.0;  // matching weighted variance of the signal
  double peak_frequency = 0.0;
  double peak_power = 0.0;
  double strouhal = 0.0;  // peak_frequency * chord / u_inf
  bool has_peak = false;
};

struct SpectrumOptions {
  Taper taper = Taper::hann;
  double chord = 1.0;
  double u_inf = 1.0;
  // a peak must exceed this multiple of the median bin power
  double peak_floor_ratio = 20.0;
};

// Mean-removed tapered periodogram with sub-bin parabolic peak
// interpolation. Throws ConfigError for signals shorter than 64 samples.
// When no bin clears the noise floor the result reports has_peak = false.
SpectrumResult compute_spectrum(std::span<const double> signal, double dt,
                                const SpectrumOptions& options = {});

// Peak required: throws WorkerError when no peak clears the floor.
SpectrumResult require_peak(std::span<const double> signal, double dt,
                            const SpectrumOptions& options = {});

// True when exactly one non-harmonic peak dominates the spectrum.
bool single_dominant_peak(const SpectrumResult& spec, double dominance_ratio = 3.0);

}  // namespace afc::run
