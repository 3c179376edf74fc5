#pragma once

#include <cmath>

#include "msbench/error.hpp"
#include "msbench/spectra/spectrum.hpp"

namespace msbench::spectra {

// Shannon entropy (nats) of the normalised raw peak intensities.
inline double spectral_entropy(const Spectrum& s) {
  const double total = s.total_intensity();
  if (!(total > 0)) {
    throw DomainError("spectral entropy undefined for spectrum '" + s.record_id() + "' without positive intensity");
  }
  double h = 0;
  for (const Peak& p : s.peaks()) {
    if (p.intensity <= 0) continue;
    const double q = p.intensity / total;
    h -= q * std::log(q);
  }
  return h < 0 ? 0.0 : h;
}

}  // namespace msbench::spectra
