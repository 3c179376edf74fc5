#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "msbench/harness/retrieval.hpp"
#include "msbench/harness/scoring.hpp"
#include "msbench/hash.hpp"
#include "msbench/modelcomp/comparison.hpp"
#include "msbench/splits/diagnostics.hpp"
#include "msbench/text.hpp"

#ifndef MSBENCH_VERSION
#define MSBENCH_VERSION "0.0.0"
#endif

namespace msbench::harness {

using Json = nlohmann::ordered_json;

inline constexpr const char* kToolVersion = MSBENCH_VERSION;

// A number rounded to 9 significant digits; non-finite values become strings.
inline Json number(double v) {
  if (!std::isfinite(v)) return std::isnan(v) ? "nan" : (v > 0 ? "inf" : "-inf");
  return std::stod(text::format_number(v));
}

inline Json number(const std::optional<double>& v) { return v ? number(*v) : Json(nullptr); }

inline std::string config_hash(const Json& config) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a64(config.dump())));
  return buf;
}

// Common report preamble. `config` holds every setting that affects the
// output; thread count is deliberately absent.
inline Json report_header(const std::string& command, std::uint64_t seed, const Json& config) {
  Json j;
  j["tool"] = "msbench";
  j["version"] = kToolVersion;
  j["command"] = command;
  j["seed"] = seed;
  j["config"] = config;
  j["config_hash"] = config_hash(config);
  return j;
}

using Aggregates = std::vector<std::pair<std::string, double>>;

inline void write_aggregates_tsv(std::ostream& out, const Aggregates& rows) {
  out << "metric\tvalue\n";
  for (const auto& [k, v] : rows) out << k << '\t' << text::format_number(v) << '\n';
}

inline Json ks_json(const splits::KsResult& ks) {
  return Json{{"d", number(ks.d)}, {"log10_p", number(ks.log10_p)}, {"z", number(ks.z)}, {"n", ks.n}, {"m", ks.m}};
}

inline Json diagnostics_json(const splits::SplitDiagnostics& d) {
  Json j;
  j["mean_tanimoto_train_train"] = number(d.mean_tanimoto_train_train);
  j["train_train_pairs"] = d.train_train_pairs;
  j["pairs"] = Json::array();
  for (const auto& p : d.pairs) {
    Json e;
    e["name"] = p.name;
    e["molecules_train"] = p.molecules_train;
    e["molecules_other"] = p.molecules_other;
    e["spectra_train"] = p.spectra_train;
    e["spectra_other"] = p.spectra_other;
    e["mean_tanimoto"] = number(p.mean_tanimoto);
    e["ks_stat"] = number(p.tanimoto_ks.d);
    e["log_ks_pval"] = number(p.tanimoto_ks.log10_p);
    e["tanimoto_ks"] = ks_json(p.tanimoto_ks);
    e["scaffold_overlap"] = {{"test_in_train", number(p.scaffold.test_in_train)},
                             {"jaccard", number(p.scaffold.jaccard)},
                             {"warnings", p.scaffold.warnings}};
    e["mean_entropy_train"] = number(p.entropy.mean_entropy_train);
    e["mean_entropy_other"] = number(p.entropy.mean_entropy_other);
    e["entropy_ks"] = ks_json(p.entropy.ks);
    j["pairs"].push_back(std::move(e));
  }
  j["warnings"] = d.warnings;
  return j;
}

inline Aggregates diagnostics_aggregates(const splits::SplitDiagnostics& d) {
  Aggregates out{{"mean_tanimoto_train_train", d.mean_tanimoto_train_train}};
  for (const auto& p : d.pairs) {
    out.emplace_back(p.name + ".mean_tanimoto", p.mean_tanimoto);
    out.emplace_back(p.name + ".ks_stat", p.tanimoto_ks.d);
    out.emplace_back(p.name + ".log_ks_pval", p.tanimoto_ks.log10_p);
    out.emplace_back(p.name + ".scaffold_test_in_train", p.scaffold.test_in_train);
    out.emplace_back(p.name + ".scaffold_jaccard", p.scaffold.jaccard);
    out.emplace_back(p.name + ".mean_entropy_train", p.entropy.mean_entropy_train);
    out.emplace_back(p.name + ".mean_entropy_other", p.entropy.mean_entropy_other);
    out.emplace_back(p.name + ".entropy_ks_stat", p.entropy.ks.d);
    out.emplace_back(p.name + ".entropy_log_ks_pval", p.entropy.ks.log10_p);
  }
  return out;
}

inline Json mean_json(const MeanOf& m) {
  return Json{{"mean", number(m.mean)}, {"count", m.count}, {"undefined", m.missing}};
}

inline Json score_json(const ScoreRun& run) {
  Json j;
  j["aggregates"] = {{"cosine", mean_json(run.cosine)},
                     {"js_similarity", mean_json(run.js_similarity)},
                     {"coverage", mean_json(run.coverage)}};
  j["records"] = Json::array();
  for (const auto& r : run.records) {
    j["records"].push_back({{"record_id", r.record_id},
                            {"cosine", number(r.score.cosine)},
                            {"js_similarity", number(r.score.js_similarity)},
                            {"coverage", number(r.score.coverage)},
                            {"dropped_peaks", r.dropped_peaks}});
  }
  j["notes"] = run.notes;
  return j;
}

inline Aggregates score_aggregates(const ScoreRun& run) {
  return {{"cosine", run.cosine.mean},
          {"js_similarity", run.js_similarity.mean},
          {"coverage", run.coverage.mean},
          {"scored_records", static_cast<double>(run.records.size())},
          {"missing_predictions", static_cast<double>(run.missing_predictions)}};
}

inline Json retrieval_json(const RetrievalRun& run) {
  const auto& a = run.aggregates;
  Json j;
  j["aggregates"] = {{"queries", run.queries.size()},
                     {"mean_rank", number(a.mean_rank)},
                     {"mean_normalized_rank", number(a.mean_normalized_rank)},
                     {"top1", number(a.top1)},
                     {"top5", number(a.top5)},
                     {"top10", number(a.top10)},
                     {"top1_percent", number(a.top1_percent)},
                     {"top5_percent", number(a.top5_percent)},
                     {"top10_percent", number(a.top10_percent)}};
  Json hist = Json::array();
  for (std::size_t b = 0; b < a.histogram.size(); ++b) {
    hist.push_back({{"lower", number(static_cast<double>(b) / static_cast<double>(a.histogram.size()))},
                    {"count", a.histogram[b]}});
  }
  j["normalized_rank_histogram"] = std::move(hist);
  j["queries"] = Json::array();
  for (const auto& q : run.queries) {
    j["queries"].push_back({{"query_id", q.query_id},
                            {"true_candidate_id", q.true_candidate_id},
                            {"rank", q.rank.rank},
                            {"total_candidates", q.rank.total_candidates},
                            {"normalized_rank", number(q.rank.normalized_rank)},
                            {"true_score", number(q.true_score)},
                            {"best_score", number(q.best_score)},
                            {"invalid_candidates", q.invalid_candidates},
                            {"duplicate_candidates", q.duplicate_candidates}});
  }
  j["dropped_queries"] = Json::array();
  for (const auto& d : run.dropped) j["dropped_queries"].push_back({{"query_id", d.query_id}, {"reason", d.reason}});
  return j;
}

inline Aggregates retrieval_aggregates_rows(const RetrievalRun& run) {
  const auto& a = run.aggregates;
  return {{"queries", static_cast<double>(run.queries.size())},
          {"dropped_queries", static_cast<double>(run.dropped.size())},
          {"mean_rank", a.mean_rank},
          {"mean_normalized_rank", a.mean_normalized_rank},
          {"top1", a.top1},
          {"top5", a.top5},
          {"top10", a.top10},
          {"top1_percent", a.top1_percent},
          {"top5_percent", a.top5_percent},
          {"top10_percent", a.top10_percent}};
}

inline Json comparison_json(const modelcomp::ComparisonReport& r) {
  Json j;
  j["models"] = r.models;
  j["conditions"] = r.conditions;
  j["direction"] = modelcomp::to_string(r.direction);
  j["alpha"] = number(r.alpha);
  Json ranks;
  for (std::size_t i = 0; i < r.models.size(); ++i) ranks[r.models[i]] = number(r.average_ranks[i]);
  j["average_ranks"] = std::move(ranks);
  if (r.friedman) {
    j["friedman"] = {{"statistic", number(r.friedman->statistic)},
                     {"log10_p", number(r.friedman->log10_p)},
                     {"dof", r.friedman->dof}};
  } else {
    j["friedman"] = nullptr;
  }
  j["pairwise"] = Json::array();
  for (const auto& p : r.pairwise) {
    j["pairwise"].push_back({{"model_a", r.models[p.model_a]},
                             {"model_b", r.models[p.model_b]},
                             {"p", number(p.wilcoxon.p)},
                             {"w_plus", number(p.wilcoxon.w_plus)},
                             {"w_minus", number(p.wilcoxon.w_minus)},
                             {"n_nonzero", p.wilcoxon.n_nonzero},
                             {"method", modelcomp::to_string(p.wilcoxon.method)},
                             {"holm_threshold", number(p.holm.threshold)},
                             {"significant", p.holm.rejected}});
  }
  j["cliques"] = Json::array();
  for (const auto& c : r.cliques) {
    Json names = Json::array();
    for (auto i : c) names.push_back(r.models[i]);
    j["cliques"].push_back(std::move(names));
  }
  j["notes"] = r.notes;
  return j;
}

inline Aggregates comparison_aggregates(const modelcomp::ComparisonReport& r) {
  Aggregates out;
  for (std::size_t i = 0; i < r.models.size(); ++i) out.emplace_back("average_rank." + r.models[i], r.average_ranks[i]);
  if (r.friedman) {
    out.emplace_back("friedman.statistic", r.friedman->statistic);
    out.emplace_back("friedman.log10_p", r.friedman->log10_p);
  }
  return out;
}

}  // namespace msbench::harness
