#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "msbench/error.hpp"

namespace msbench::modelcomp {

// 1-based ranks, tied values share the mean of their positions. With
// higher_better the largest value gets rank 1.
inline std::vector<double> midranks(const std::vector<double>& values, bool higher_better = false) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return higher_better ? values[a] > values[b] : values[a] < values[b];
  });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    const double mid = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (std::size_t t = i; t <= j; ++t) ranks[order[t]] = mid;
    i = j + 1;
  }
  return ranks;
}

// log10 of the chi-square upper tail with `dof` degrees of freedom. Falls back
// to the asymptotic expansion of Q(a, x) once the tail underflows.
inline double chi_square_log10_sf(double x, double dof) {
  if (!(dof > 0)) throw UsageError("chi-square needs positive degrees of freedom");
  if (!(x > 0)) return 0.0;
  const double a = dof / 2.0;
  const double hx = x / 2.0;
  const double q = boost::math::gamma_q(a, hx);
  if (q > 1e-300) return std::min(0.0, std::log10(q));
  // Q(a, x) ~ x^(a-1) e^-x / Gamma(a) * sum_k (a-1)...(a-k) / x^k
  double series = 1, term = 1;
  for (int k = 1; k < 60; ++k) {
    const double next = term * (a - k) / hx;
    if (std::abs(next) >= std::abs(term)) break;
    term = next;
    series += term;
    if (std::abs(term) < 1e-17) break;
  }
  const double ln_q = (a - 1) * std::log(hx) - hx - std::lgamma(a) + std::log(series);
  return ln_q / std::numbers::ln10;
}

struct FriedmanResult {
  double statistic = 0;
  double log10_p = 0;
  std::size_t dof = 0;
};

// Friedman chi-square from the average ranks of k models over n conditions,
// without tie correction.
inline FriedmanResult friedman_from_ranks(const std::vector<double>& average_ranks, std::size_t n) {
  const std::size_t k = average_ranks.size();
  if (k < 2 || n < 1) throw UsageError("Friedman test needs k >= 2 models and at least one condition");
  const double kd = static_cast<double>(k);
  double sum_sq = 0;
  for (double r : average_ranks) sum_sq += r * r;
  FriedmanResult out;
  out.dof = k - 1;
  out.statistic = std::max(0.0, 12.0 * static_cast<double>(n) / (kd * (kd + 1)) *
                                    (sum_sq - kd * (kd + 1) * (kd + 1) / 4.0));
  // Clear rounding residue from a fully tied matrix.
  if (out.statistic < 1e-12) out.statistic = 0;
  out.log10_p = chi_square_log10_sf(out.statistic, static_cast<double>(out.dof));
  return out;
}

enum class WilcoxonMethod { Exact, Normal, Degenerate };

inline const char* to_string(WilcoxonMethod m) {
  switch (m) {
    case WilcoxonMethod::Exact: return "exact";
    case WilcoxonMethod::Normal: return "normal";
    case WilcoxonMethod::Degenerate: return "all-zero";
  }
  return "?";
}

struct WilcoxonResult {
  double p = 1;
  double w_plus = 0;
  double w_minus = 0;
  std::size_t n_nonzero = 0;
  WilcoxonMethod method = WilcoxonMethod::Degenerate;
  std::vector<std::string> notes;
};

inline constexpr std::size_t kWilcoxonExactMax = 25;

// Two-sided Wilcoxon signed-rank test on paired samples. Zero differences are
// discarded; midranks handle tied magnitudes. Exact null distribution of W+
// (enumerated over sign assignments of the observed ranks) up to 25 non-zero
// pairs, else the normal approximation with tie-corrected variance and
// continuity correction.
inline WilcoxonResult wilcoxon_signed_rank(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw UsageError("Wilcoxon test needs paired samples of equal length");
  std::vector<double> diffs;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a[i] - b[i];
    if (std::isnan(d)) throw DomainError("Wilcoxon test: NaN score");
    if (d != 0) diffs.push_back(d);
  }
  WilcoxonResult out;
  out.n_nonzero = diffs.size();
  if (diffs.empty()) {
    out.notes.push_back("all paired differences are zero; p = 1");
    return out;
  }
  if (diffs.size() < 5) {
    out.notes.push_back("only " + std::to_string(diffs.size()) + " non-zero differences; the test has little power");
  }
  std::vector<double> magnitude(diffs.size());
  for (std::size_t i = 0; i < diffs.size(); ++i) magnitude[i] = std::abs(diffs[i]);
  const auto ranks = midranks(magnitude);
  for (std::size_t i = 0; i < diffs.size(); ++i) (diffs[i] > 0 ? out.w_plus : out.w_minus) += ranks[i];
  const std::size_t n = diffs.size();

  if (n <= kWilcoxonExactMax) {
    out.method = WilcoxonMethod::Exact;
    // Midranks are multiples of 1/2; count sign assignments by doubled rank sum.
    std::vector<int> twice(n);
    int total = 0;
    for (std::size_t i = 0; i < n; ++i) total += twice[i] = static_cast<int>(std::lround(2 * ranks[i]));
    std::vector<double> ways(static_cast<std::size_t>(total) + 1, 0.0);
    ways[0] = 1;
    int reach = 0;
    for (int r : twice) {
      for (int s = reach; s >= 0; --s) ways[static_cast<std::size_t>(s + r)] += ways[static_cast<std::size_t>(s)];
      reach += r;
    }
    const int observed = static_cast<int>(std::lround(2 * out.w_plus));
    double below = 0, above = 0;
    for (int s = 0; s <= total; ++s) {
      if (s <= observed) below += ways[static_cast<std::size_t>(s)];
      if (s >= observed) above += ways[static_cast<std::size_t>(s)];
    }
    const double all = std::ldexp(1.0, static_cast<int>(n));
    out.p = std::min(1.0, 2.0 * std::min(below, above) / all);
    return out;
  }

  out.method = WilcoxonMethod::Normal;
  const double nd = static_cast<double>(n);
  const double mean = nd * (nd + 1) / 4.0;
  double variance = nd * (nd + 1) * (2 * nd + 1) / 24.0;
  std::vector<double> sorted = magnitude;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    variance -= (t * t * t - t) / 48.0;
    i = j;
  }
  if (!(variance > 0)) {
    out.p = 1;
    return out;
  }
  const double z = std::max(0.0, std::abs(out.w_plus - mean) - 0.5) / std::sqrt(variance);
  out.p = std::min(1.0, std::erfc(z / std::numbers::sqrt2));
  return out;
}

struct HolmDecision {
  double threshold = 0;  // alpha / (m - i + 1) at the hypothesis' sorted position i
  bool rejected = false;
};

// Holm step-down: sorted ascending, H_(i) is rejected while p_(i) <=
// alpha / (m - i + 1); after the first failure no later hypothesis is
// rejected. Results are in input order.
inline std::vector<HolmDecision> holm_correct(const std::vector<double>& p, double alpha = 0.05) {
  if (!(alpha > 0) || !(alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  const std::size_t m = p.size();
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return p[x] < p[y]; });
  std::vector<HolmDecision> out(m);
  bool stopped = false;
  for (std::size_t i = 0; i < m; ++i) {
    auto& d = out[order[i]];
    d.threshold = alpha / static_cast<double>(m - i);
    if (!stopped && p[order[i]] <= d.threshold) {
      d.rejected = true;
    } else {
      stopped = true;
    }
  }
  return out;
}

}  // namespace msbench::modelcomp
