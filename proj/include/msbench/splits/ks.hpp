#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "msbench/error.hpp"

namespace msbench::splits {

struct KsResult {
  double d = 0;        // sup |F_n - G_m|
  double log10_p = 0;  // <= 0
  double z = 0;        // d * sqrt(nm / (n + m))
  std::size_t n = 0;
  std::size_t m = 0;
};

// D over the merged sorted samples with CDFs F(t) = #{s <= t} / n.
inline double ks_statistic(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw UsageError("KS test needs two non-empty samples");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n = static_cast<double>(a.size());
  const double m = static_cast<double>(b.size());
  std::size_t i = 0, j = 0;
  double d = 0;
  while (i < a.size() && j < b.size()) {
    const double t = std::min(a[i], b[j]);
    while (i < a.size() && a[i] == t) ++i;
    while (j < b.size() && b[j] == t) ++j;
    d = std::max(d, std::abs(static_cast<double>(i) / n - static_cast<double>(j) / m));
  }
  // Past the end of one sample the gap only shrinks towards 0.
  return d;
}

// log10 of the Kolmogorov tail 2 sum_{k>=1} (-1)^{k-1} exp(-2 k^2 z^2). The
// series is summed until terms drop below 1e-16; above z = 3 only the first
// term is representable and the tail is evaluated in log space. Below
// z = 0.1 the tail equals 1 to double precision.
inline double kolmogorov_log10_pvalue(double z) {
  if (!(z >= 0)) throw UsageError("Kolmogorov statistic must be non-negative");
  if (z < 0.1) return 0.0;
  if (z > 3.0) return std::log10(2.0) - 2.0 * z * z / std::numbers::ln10;
  double sum = 0;
  for (int k = 1; k < 100000; ++k) {
    const double term = std::exp(-2.0 * k * k * z * z);
    sum += (k % 2 == 1) ? term : -term;
    if (term < 1e-16) break;
  }
  const double p = std::min(1.0, 2.0 * sum);
  return std::min(0.0, std::log10(p));
}

inline KsResult ks_two_sample(const std::vector<double>& a, const std::vector<double>& b) {
  KsResult r;
  r.d = ks_statistic(a, b);
  r.n = a.size();
  r.m = b.size();
  const double n = static_cast<double>(r.n);
  const double m = static_cast<double>(r.m);
  r.z = r.d * std::sqrt(n * m / (n + m));
  r.log10_p = kolmogorov_log10_pvalue(r.z);
  return r;
}

}  // namespace msbench::splits
