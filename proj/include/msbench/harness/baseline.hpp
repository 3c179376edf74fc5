#pragma once

#include <map>
#include <string>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/fingerprint/morgan.hpp"
#include "msbench/harness/dataset.hpp"
#include "msbench/harness/predictions.hpp"
#include "msbench/parallel.hpp"
#include "msbench/spectra/binning.hpp"

namespace msbench::harness {

struct BaselineQuery {
  std::string id;
  std::string smiles;
};

struct BaselineOptions {
  FingerprintOptions fingerprint;
  double resolution = 1.0;
  double max_mz = spectra::kDefaultMaxMz;
  unsigned threads = 1;
};

struct BaselineMatch {
  std::string query_id;
  std::string train_record_id;
  double tanimoto = 0;
};

// Nearest-neighbour predictor: each query gets the binned spectrum of the
// training record whose molecule has the highest Tanimoto similarity. Ties go
// to the smaller molecule key, then the smaller record id. A training record
// with the query's own id is never its neighbour.
inline std::vector<PredictionRow> baseline_nn_predict(const Dataset& train, const std::vector<BaselineQuery>& queries,
                                                      const BaselineOptions& o,
                                                      std::vector<BaselineMatch>* matches = nullptr) {
  if (train.records.empty()) throw DataError("baseline needs a non-empty training set");
  // Training records in tie-break order.
  std::vector<const DatasetRecord*> ordered;
  for (const auto& r : train.records) ordered.push_back(&r);
  std::sort(ordered.begin(), ordered.end(), [](const DatasetRecord* a, const DatasetRecord* b) {
    return std::tie(a->molecule_key, a->record_id) < std::tie(b->molecule_key, b->record_id);
  });
  const auto features = molecule_features(train, o.fingerprint);
  std::vector<const fp::FingerprintBits*> train_fp;
  for (const auto* r : ordered) train_fp.push_back(&features.at(r->molecule_key).fingerprint);

  std::vector<fp::FingerprintBits> query_fp(queries.size());
  parallel_for(queries.size(), o.threads, [&](std::size_t i) {
    query_fp[i] = fp::morgan_fingerprint(mol::parse_smiles(queries[i].smiles), o.fingerprint.radius, o.fingerprint.bits);
  });

  std::vector<std::size_t> best(queries.size(), ordered.size());
  std::vector<double> best_t(queries.size(), -1.0);
  parallel_for(queries.size(), o.threads, [&](std::size_t q) {
    for (std::size_t t = 0; t < ordered.size(); ++t) {
      if (ordered[t]->record_id == queries[q].id) continue;
      const double s = fp::tanimoto(query_fp[q], *train_fp[t]);
      if (s > best_t[q]) {
        best_t[q] = s;
        best[q] = t;
      }
    }
  });

  std::map<std::size_t, std::vector<double>> binned;
  std::vector<PredictionRow> out;
  for (std::size_t q = 0; q < queries.size(); ++q) {
    if (best[q] == ordered.size()) {
      throw DataError("baseline: no training record other than '" + queries[q].id + "' itself");
    }
    auto it = binned.find(best[q]);
    if (it == binned.end()) {
      it = binned.emplace(best[q], spectra::bin_spectrum(ordered[best[q]]->spectrum, o.resolution, o.max_mz).values)
               .first;
    }
    out.push_back(PredictionRow::from_dense(queries[q].id, it->second));
    if (matches) matches->push_back({queries[q].id, ordered[best[q]]->record_id, best_t[q]});
  }
  return out;
}

}  // namespace msbench::harness
