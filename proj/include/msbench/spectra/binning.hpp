#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/spectra/spectrum.hpp"

namespace msbench::spectra {

inline constexpr double kDefaultMaxMz = 1000.0;

struct BinnedSpectrum {
  double resolution = 1.0;  // bin width, Da
  double max_mz = kDefaultMaxMz;
  std::vector<double> values;
  std::size_t dropped_peak_count = 0;
  double dropped_intensity = 0;

  std::size_t size() const { return values.size(); }
};

// ceil(max_mz / resolution), ignoring floating-point residue such as
// 1000 / 0.1 = 10000.000000000002.
inline std::size_t bin_count(double resolution, double max_mz) {
  if (!(resolution > 0) || !std::isfinite(resolution)) {
    throw UsageError("bin resolution must be positive, got " + text::format_number(resolution));
  }
  if (!(max_mz > 0) || !std::isfinite(max_mz)) {
    throw UsageError("max m/z must be positive, got " + text::format_number(max_mz));
  }
  const double q = max_mz / resolution;
  const double nearest = std::round(q);
  if (std::abs(q - nearest) <= 1e-9 * std::max(1.0, nearest)) return static_cast<std::size_t>(nearest);
  return static_cast<std::size_t>(std::ceil(q));
}

// Sum intensities into bins floor(mz / resolution); peaks at or above max_mz
// are dropped and counted.
inline BinnedSpectrum bin_spectrum(const Spectrum& s, double resolution, double max_mz = kDefaultMaxMz) {
  BinnedSpectrum out;
  out.resolution = resolution;
  out.max_mz = max_mz;
  out.values.assign(bin_count(resolution, max_mz), 0.0);
  for (const Peak& p : s.peaks()) {
    if (p.mz >= max_mz) {
      ++out.dropped_peak_count;
      out.dropped_intensity += p.intensity;
      continue;
    }
    auto index = static_cast<std::size_t>(std::floor(p.mz / resolution));
    if (index >= out.values.size()) index = out.values.size() - 1;
    out.values[index] += p.intensity;
  }
  return out;
}

enum class Norm { L1, L2 };

inline std::vector<double> log1p_transform(const std::vector<double>& v) {
  std::vector<double> out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = std::log1p(v[i]);
  return out;
}

// Divides by the L1 or L2 norm; an all-zero vector is returned unchanged.
inline std::vector<double> normalize(std::vector<double> v, Norm norm) {
  double total = 0;
  if (norm == Norm::L1) {
    for (double x : v) total += std::abs(x);
  } else {
    for (double x : v) total += x * x;
    total = std::sqrt(total);
  }
  if (total == 0) return v;
  for (double& x : v) x /= total;
  return v;
}

// log1p, then L1 or L2 normalisation.
inline std::vector<double> preprocess(const std::vector<double>& values, Norm norm) {
  return normalize(log1p_transform(values), norm);
}

inline std::vector<double> preprocess(const BinnedSpectrum& b, Norm norm) { return preprocess(b.values, norm); }

}  // namespace msbench::spectra
