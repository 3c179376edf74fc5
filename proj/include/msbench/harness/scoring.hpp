#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/harness/dataset.hpp"
#include "msbench/harness/predictions.hpp"
#include "msbench/metrics/spectrum_metrics.hpp"
#include "msbench/parallel.hpp"
#include "msbench/spectra/binning.hpp"

namespace msbench::harness {

struct RecordScore {
  std::string record_id;
  metrics::SpectrumScore score;
  std::size_t dropped_peaks = 0;
};

struct MeanOf {
  double mean = 0;
  std::size_t count = 0;    // values that entered the mean
  std::size_t missing = 0;  // values that were undefined
};

struct ScoreRun {
  std::vector<RecordScore> records;  // dataset order
  std::size_t missing_predictions = 0;
  std::size_t dropped_peaks = 0;
  MeanOf cosine, js_similarity, coverage;
  std::vector<std::string> notes;
};

struct ScoreOptions {
  double resolution = 1.0;
  double max_mz = spectra::kDefaultMaxMz;
  double tau = metrics::kDefaultTau;
  unsigned threads = 1;
};

namespace detail {
inline MeanOf mean_of(const std::vector<std::optional<double>>& values) {
  MeanOf m;
  double sum = 0;
  for (const auto& v : values) {
    if (!v) {
      ++m.missing;
      continue;
    }
    sum += *v;
    ++m.count;
  }
  m.mean = m.count ? sum / static_cast<double>(m.count) : 0.0;
  return m;
}
}  // namespace detail

// Scores every dataset record that has a prediction. Predictions for unknown
// or repeated record ids are errors; records without one are counted.
inline ScoreRun score_predictions(const Dataset& truth, const PredictionFile& predictions, const ScoreOptions& o) {
  std::map<std::string, const PredictionRow*> by_id;
  for (const auto& row : predictions.rows) {
    if (!by_id.emplace(row.record_id, &row).second) {
      throw DataError("prediction line " + std::to_string(row.line) + ": record '" + row.record_id +
                      "' predicted more than once");
    }
  }
  std::map<std::string, const DatasetRecord*> records;
  for (const auto& r : truth.records) records.emplace(r.record_id, &r);
  for (const auto& [id, row] : by_id) {
    if (!records.count(id)) {
      throw DataError("prediction line " + std::to_string(row->line) + ": record '" + id + "' is not in the dataset");
    }
  }

  ScoreRun run;
  std::vector<const DatasetRecord*> todo;
  for (const auto& r : truth.records) {
    if (by_id.count(r.record_id)) {
      todo.push_back(&r);
    } else {
      ++run.missing_predictions;
    }
  }
  run.records.resize(todo.size());
  std::vector<std::vector<std::string>> notes(todo.size());
  parallel_for(todo.size(), o.threads, [&](std::size_t i) {
    const auto binned = spectra::bin_spectrum(todo[i]->spectrum, o.resolution, o.max_mz);
    const auto pred = by_id.at(todo[i]->record_id)->dense();
    run.records[i].record_id = todo[i]->record_id;
    run.records[i].dropped_peaks = binned.dropped_peak_count;
    run.records[i].score = metrics::score_spectrum(pred, binned.values, o.tau, &notes[i]);
  });
  std::vector<std::optional<double>> cos, js, cov;
  for (std::size_t i = 0; i < todo.size(); ++i) {
    for (const auto& n : notes[i]) run.notes.push_back("record '" + todo[i]->record_id + "': " + n);
    run.dropped_peaks += run.records[i].dropped_peaks;
    cos.push_back(run.records[i].score.cosine);
    js.push_back(run.records[i].score.js_similarity);
    cov.push_back(run.records[i].score.coverage);
  }
  run.cosine = detail::mean_of(cos);
  run.js_similarity = detail::mean_of(js);
  run.coverage = detail::mean_of(cov);
  return run;
}

}  // namespace msbench::harness
