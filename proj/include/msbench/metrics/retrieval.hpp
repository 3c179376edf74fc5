#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "msbench/error.hpp"

namespace msbench::metrics {

struct RankResult {
  std::size_t rank = 0;  // 0-based
  std::size_t total_candidates = 0;
  double normalized_rank = 0;  // rank / total_candidates
};

struct ScoredCandidate {
  std::string id;
  double score = 0;
};

// Position of `true_id` when sorted by descending score, ties resolved
// against the true candidate: rank = #(score > s) + #(others with score == s).
// Independent of list order.
inline RankResult rank_candidates(const std::vector<ScoredCandidate>& scored, const std::string& true_id) {
  if (scored.empty()) throw UsageError("ranking needs at least one candidate");
  const ScoredCandidate* truth = nullptr;
  for (const auto& c : scored) {
    if (std::isnan(c.score)) throw DomainError("candidate '" + c.id + "' has a NaN score");
    if (c.id == true_id) {
      if (truth) throw DataError("true candidate '" + true_id + "' appears more than once");
      truth = &c;
    }
  }
  if (!truth) throw DataError("true candidate '" + true_id + "' is not among the candidates");
  RankResult r;
  for (const auto& c : scored) {
    if (&c != truth && c.score >= truth->score) ++r.rank;
  }
  r.total_candidates = scored.size();
  r.normalized_rank = static_cast<double>(r.rank) / static_cast<double>(r.total_candidates);
  return r;
}

// Fraction of queries with rank < k.
inline double top_k(const std::vector<RankResult>& results, std::size_t k) {
  if (results.empty()) throw UsageError("top-k over an empty result list");
  if (k < 1) throw UsageError("top-k needs k >= 1");
  std::size_t hits = 0;
  for (const auto& r : results) hits += r.rank < k;
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

// Fraction of queries with normalized rank < k_percent / 100.
inline double top_k_percent(const std::vector<RankResult>& results, double k_percent) {
  if (results.empty()) throw UsageError("top-k% over an empty result list");
  if (!(k_percent > 0) || k_percent > 100) throw UsageError("top-k% needs 0 < k <= 100");
  const double cut = k_percent / 100.0;
  std::size_t hits = 0;
  for (const auto& r : results) hits += r.normalized_rank < cut;
  return static_cast<double>(hits) / static_cast<double>(results.size());
}

}  // namespace msbench::metrics
