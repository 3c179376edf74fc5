#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/spectra/binning.hpp"

namespace msbench::metrics {

inline constexpr double kDefaultTau = 0.01;

namespace detail {
inline void check_lengths(std::span<const double> a, std::span<const double> b, const char* what) {
  if (a.size() != b.size()) {
    throw UsageError(std::string(what) + ": length mismatch (" + std::to_string(a.size()) + " vs " +
                     std::to_string(b.size()) + ")");
  }
}

inline double sum(std::span<const double> v) {
  double s = 0;
  for (double x : v) s += x;
  return s;
}
}  // namespace detail

// Dot product of the L2-normalised inputs. Both all-zero gives 0 and a note.
inline double cosine_similarity(std::span<const double> pred, std::span<const double> truth,
                                std::vector<std::string>* notes = nullptr) {
  detail::check_lengths(pred, truth, "cosine");
  double dot = 0, np = 0, nt = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    dot += pred[i] * truth[i];
    np += pred[i] * pred[i];
    nt += truth[i] * truth[i];
  }
  if (np == 0 || nt == 0) {
    if (np == 0 && nt == 0 && notes) notes->push_back("cosine: both vectors are all-zero");
    return 0.0;
  }
  // sqrt(np * nt) is exactly np for identical inputs; split only on overflow.
  const double prod = np * nt;
  const double norm = std::isfinite(prod) && prod > 0 ? std::sqrt(prod) : std::sqrt(np) * std::sqrt(nt);
  return std::clamp(dot / norm, -1.0, 1.0);
}

// 1 - Jensen-Shannon divergence (base 2) of the L1-normalised inputs.
// Evaluated as 1/2 sum p log2(m'/p) + q log2(m'/q) with m' = p + q, which is
// algebraically 1 - JS and gives exactly 0 on disjoint supports. Dividing by
// sum(p + q) instead of 2 absorbs normalisation rounding, so identical inputs
// give exactly 1.
inline double js_similarity(std::span<const double> pred, std::span<const double> truth) {
  detail::check_lengths(pred, truth, "JS similarity");
  for (double x : pred) {
    if (x < 0) throw DomainError("JS similarity: negative entry");
  }
  for (double x : truth) {
    if (x < 0) throw DomainError("JS similarity: negative entry");
  }
  const double sp = detail::sum(pred);
  const double st = detail::sum(truth);
  if (!(sp > 0) || !(st > 0)) throw DomainError("JS similarity: all-zero vector");
  double acc = 0, mass = 0;
  for (std::size_t i = 0; i < pred.size(); ++i) {
    const double p = pred[i] / sp;
    const double q = truth[i] / st;
    const double m = p + q;
    const double tp = p > 0 ? p * std::log2(m / p) : 0.0;
    const double tq = q > 0 ? q * std::log2(m / q) : 0.0;
    acc += tp + tq;  // commutative pair keeps the result exactly symmetric
    mass += m;
  }
  return std::clamp(acc / mass, 0.0, 1.0);
}

// Fraction of truth bins above tau (after max-normalisation) that are also
// above tau in the prediction. nullopt when no truth bin clears tau.
inline std::optional<double> spectral_coverage(std::span<const double> pred, std::span<const double> truth,
                                               double tau = kDefaultTau) {
  detail::check_lengths(pred, truth, "coverage");
  if (!(tau >= 0) || !(tau < 1)) throw UsageError("coverage threshold must lie in [0, 1)");
  const double mp = pred.empty() ? 0 : *std::max_element(pred.begin(), pred.end());
  const double mt = truth.empty() ? 0 : *std::max_element(truth.begin(), truth.end());
  if (!(mt > 0)) return std::nullopt;
  std::size_t present = 0, shared = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] / mt > tau) {
      ++present;
      if (mp > 0 && pred[i] / mp > tau) ++shared;
    }
  }
  if (present == 0) return std::nullopt;
  return static_cast<double>(shared) / static_cast<double>(present);
}

struct SpectrumScore {
  double cosine = 0;
  std::optional<double> js_similarity;  // missing when either side has no signal
  std::optional<double> coverage;       // missing when truth has no bin above tau
};

// Scores raw binned intensities: cosine and JS on log1p values, coverage on
// the raw bins.
inline SpectrumScore score_spectrum(std::span<const double> pred, std::span<const double> truth,
                                    double tau = kDefaultTau, std::vector<std::string>* notes = nullptr) {
  detail::check_lengths(pred, truth, "score");
  const auto lp = spectra::log1p_transform(std::vector<double>(pred.begin(), pred.end()));
  const auto lt = spectra::log1p_transform(std::vector<double>(truth.begin(), truth.end()));
  SpectrumScore s;
  s.cosine = cosine_similarity(lp, lt, notes);
  if (detail::sum(lp) > 0 && detail::sum(lt) > 0) {
    s.js_similarity = js_similarity(lp, lt);
  } else if (notes) {
    notes->push_back("JS similarity: all-zero vector, value missing");
  }
  s.coverage = spectral_coverage(pred, truth, tau);
  return s;
}

}  // namespace msbench::metrics
