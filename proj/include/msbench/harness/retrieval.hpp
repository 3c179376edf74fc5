#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/harness/candidates.hpp"
#include "msbench/harness/dataset.hpp"
#include "msbench/harness/predictions.hpp"
#include "msbench/metrics/retrieval.hpp"
#include "msbench/parallel.hpp"
#include "msbench/spectra/binning.hpp"

namespace msbench::harness {

inline constexpr std::size_t kRankHistogramBins = 50;

enum class MergeMode { Sum, Max };

inline MergeMode merge_mode_from_string(std::string_view s) {
  if (s == "sum") return MergeMode::Sum;
  if (s == "max") return MergeMode::Max;
  throw UsageError("merge mode must be 'sum' or 'max', got '" + std::string(s) + "'");
}

inline const char* to_string(MergeMode m) { return m == MergeMode::Sum ? "sum" : "max"; }

struct RetrieveOptions {
  double resolution = 1.0;
  double max_mz = spectra::kDefaultMaxMz;
  MergeMode merge = MergeMode::Sum;
  unsigned threads = 1;
};

struct QueryResult {
  std::string query_id;
  std::string true_candidate_id;
  metrics::RankResult rank;
  double true_score = 0;
  double best_score = 0;
  std::size_t invalid_candidates = 0;
  std::size_t duplicate_candidates = 0;  // removed as the same structure
};

struct DroppedQuery {
  std::string query_id;
  std::string reason;
};

struct RetrievalAggregates {
  double mean_rank = 0;
  double mean_normalized_rank = 0;
  double top1 = 0, top5 = 0, top10 = 0;
  double top1_percent = 0, top5_percent = 0, top10_percent = 0;
  std::vector<std::size_t> histogram;  // normalized rank, 50 bins on [0, 1)
};

struct RetrievalRun {
  std::vector<QueryResult> queries;  // sorted by query id
  std::vector<DroppedQuery> dropped;
  std::size_t merged_predictions = 0;  // rows folded into an earlier row with the same id
  std::size_t invalid_candidates = 0;
  std::size_t duplicate_candidates = 0;
  RetrievalAggregates aggregates;
};

// Folds rows with repeated ids (one per collision energy) into one.
inline std::unordered_map<std::string, PredictionRow> merge_predictions(const std::vector<PredictionRow>& rows,
                                                                        MergeMode mode, std::size_t* merged = nullptr) {
  std::unordered_map<std::string, PredictionRow> out;
  for (const auto& row : rows) {
    auto [it, fresh] = out.try_emplace(row.record_id, row);
    if (fresh) continue;
    if (merged) ++*merged;
    std::map<std::uint32_t, double> acc(it->second.entries.begin(), it->second.entries.end());
    for (const auto& [b, x] : row.entries) {
      auto [slot, inserted] = acc.try_emplace(b, x);
      if (!inserted) slot->second = mode == MergeMode::Sum ? slot->second + x : std::max(slot->second, x);
    }
    it->second.entries.assign(acc.begin(), acc.end());
  }
  return out;
}

// Cosine between a dense log1p query and log1p of a sparse prediction. Sums
// run over the prediction's bins in ascending order, so a prediction equal to
// the query scores exactly 1.
inline double sparse_log1p_cosine(const std::vector<double>& query_log1p, const PredictionRow& pred) {
  double dot = 0, np = 0, nq = 0;
  for (double q : query_log1p) nq += q * q;
  for (const auto& [b, x] : pred.entries) {
    const double p = std::log1p(x);
    dot += p * query_log1p[b];
    np += p * p;
  }
  if (np == 0 || nq == 0) return 0.0;
  const double prod = np * nq;
  const double norm = std::isfinite(prod) && prod > 0 ? std::sqrt(prod) : std::sqrt(np) * std::sqrt(nq);
  return std::clamp(dot / norm, -1.0, 1.0);
}

inline RetrievalAggregates retrieval_aggregates(const std::vector<QueryResult>& results) {
  RetrievalAggregates a;
  a.histogram.assign(kRankHistogramBins, 0);
  if (results.empty()) return a;
  std::vector<metrics::RankResult> ranks;
  for (const auto& q : results) {
    ranks.push_back(q.rank);
    a.mean_rank += static_cast<double>(q.rank.rank);
    a.mean_normalized_rank += q.rank.normalized_rank;
    const auto bin = static_cast<std::size_t>(q.rank.normalized_rank * kRankHistogramBins);
    ++a.histogram[std::min(bin, kRankHistogramBins - 1)];
  }
  const double n = static_cast<double>(results.size());
  a.mean_rank /= n;
  a.mean_normalized_rank /= n;
  a.top1 = metrics::top_k(ranks, 1);
  a.top5 = metrics::top_k(ranks, 5);
  a.top10 = metrics::top_k(ranks, 10);
  a.top1_percent = metrics::top_k_percent(ranks, 1);
  a.top5_percent = metrics::top_k_percent(ranks, 5);
  a.top10_percent = metrics::top_k_percent(ranks, 10);
  return a;
}

// Ranks each query's candidates by cosine between the query spectrum and the
// candidate's predicted spectrum. Queries come from a dataset whose records
// carry a `true_candidate_id` column. A prediction id is either
// "<query_id>/<candidate_id>" or, shared across queries, "<candidate_id>".
// Candidates are reduced to one per structure, keeping the true candidate, or
// else the smallest id. Candidates without a valid structure are removed; a
// query whose true candidate is among them, or with no candidates at all, is
// dropped.
inline RetrievalRun run_retrieval(const Dataset& queries, const std::vector<CandidateRow>& candidates,
                                  const std::vector<PredictionRow>& predictions, const RetrieveOptions& o) {
  RetrievalRun run;
  const auto preds = merge_predictions(predictions, o.merge, &run.merged_predictions);
  const std::size_t bins = spectra::bin_count(o.resolution, o.max_mz);
  for (const auto& [id, row] : preds) {
    if (row.bins != bins) throw DataError("prediction '" + id + "' does not match the run binning");
  }

  // Structure keys, computed once per distinct SMILES.
  std::map<std::string, std::optional<std::string>> keys;
  for (const auto& c : candidates) keys.emplace(c.smiles, std::nullopt);
  std::vector<std::pair<const std::string, std::optional<std::string>>*> key_slots;
  for (auto& kv : keys) key_slots.push_back(&kv);
  parallel_for(key_slots.size(), o.threads, [&](std::size_t i) {
    try {
      key_slots[i]->second = molecule_key(key_slots[i]->first);
    } catch (const Error&) {
    }
  });

  std::map<std::string, std::vector<const CandidateRow*>> by_query;
  for (const auto& c : candidates) by_query[c.query_id].push_back(&c);

  std::vector<const DatasetRecord*> todo;
  for (const auto& q : queries.records) todo.push_back(&q);
  std::sort(todo.begin(), todo.end(),
            [](const DatasetRecord* a, const DatasetRecord* b) { return a->record_id < b->record_id; });
  for (std::size_t i = 1; i < todo.size(); ++i) {
    if (todo[i]->record_id == todo[i - 1]->record_id) {
      throw DataError("query '" + todo[i]->record_id + "' appears more than once");
    }
  }

  std::vector<std::optional<QueryResult>> results(todo.size());
  std::vector<std::string> drop_reason(todo.size());
  parallel_for(todo.size(), o.threads, [&](std::size_t qi) {
    const auto& q = *todo[qi];
    const auto true_id = spectra::find_field(q.fields, "true_candidate_id");
    if (!true_id || true_id->empty()) throw DataError("query '" + q.record_id + "' has no true_candidate_id");
    QueryResult res;
    res.query_id = q.record_id;
    res.true_candidate_id = *true_id;

    const auto it = by_query.find(q.record_id);
    if (it == by_query.end()) {
      drop_reason[qi] = "no candidates";
      return;
    }
    bool true_seen = false, true_valid = false;
    std::map<std::string, const CandidateRow*> by_structure;
    for (const auto* c : it->second) {
      const bool is_true = c->candidate_id == *true_id;
      true_seen |= is_true;
      const auto& key = keys.at(c->smiles);
      if (!key) {
        ++res.invalid_candidates;
        continue;
      }
      true_valid |= is_true;
      auto [slot, fresh] = by_structure.try_emplace(*key, c);
      if (fresh) continue;
      ++res.duplicate_candidates;
      const auto* kept = slot->second;
      const bool kept_true = kept->candidate_id == *true_id;
      if (!kept_true && (is_true || c->candidate_id < kept->candidate_id)) slot->second = c;
    }
    if (!true_seen) {
      throw DataError("query '" + q.record_id + "': true candidate '" + *true_id + "' is not among its candidates");
    }
    if (!true_valid) {
      drop_reason[qi] = "true candidate has no valid structure";
      return;
    }

    const auto query = spectra::log1p_transform(spectra::bin_spectrum(q.spectrum, o.resolution, o.max_mz).values);
    std::vector<metrics::ScoredCandidate> scored;
    scored.reserve(by_structure.size());
    for (const auto& [key, c] : by_structure) {
      auto p = preds.find(q.record_id + "/" + c->candidate_id);
      if (p == preds.end()) p = preds.find(c->candidate_id);
      if (p == preds.end()) {
        throw DataError("query '" + q.record_id + "': no prediction for candidate '" + c->candidate_id + "'");
      }
      scored.push_back({c->candidate_id, sparse_log1p_cosine(query, p->second)});
    }
    res.rank = metrics::rank_candidates(scored, *true_id);
    for (const auto& s : scored) {
      if (s.id == *true_id) res.true_score = s.score;
      res.best_score = std::max(res.best_score, s.score);
    }
    results[qi] = std::move(res);
  });

  for (std::size_t i = 0; i < todo.size(); ++i) {
    if (!results[i]) {
      run.dropped.push_back({todo[i]->record_id, drop_reason[i]});
      continue;
    }
    run.invalid_candidates += results[i]->invalid_candidates;
    run.duplicate_candidates += results[i]->duplicate_candidates;
    run.queries.push_back(std::move(*results[i]));
  }
  run.aggregates = retrieval_aggregates(run.queries);
  return run;
}

}  // namespace msbench::harness
