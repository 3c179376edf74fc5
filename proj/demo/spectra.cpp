// Bin two spectra and score one against the other.

#include <cstdio>

#include "msbench/metrics/spectrum_metrics.hpp"
#include "msbench/spectra/binning.hpp"
#include "msbench/spectra/entropy.hpp"

int main() {
  using namespace msbench;
  const spectra::Spectrum truth({{91.05, 100}, {119.05, 35}, {137.06, 60}, {195.09, 12}});
  const spectra::Spectrum pred({{91.05, 80}, {137.06, 70}, {150.0, 5}});

  const auto t = spectra::bin_spectrum(truth, 1.0);
  const auto p = spectra::bin_spectrum(pred, 1.0);
  const auto s = metrics::score_spectrum(p.values, t.values);

  std::printf("entropy(truth) = %.4f nats\n", spectra::spectral_entropy(truth));
  std::printf("cosine         = %.4f\n", s.cosine);
  if (s.js_similarity) std::printf("js similarity  = %.4f\n", *s.js_similarity);
  if (s.coverage) std::printf("coverage       = %.4f\n", *s.coverage);
}
