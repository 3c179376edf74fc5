#pragma once

#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/harness/baseline.hpp"
#include "msbench/harness/candidates.hpp"
#include "msbench/harness/dataset.hpp"
#include "msbench/harness/import.hpp"
#include "msbench/harness/predictions.hpp"
#include "msbench/harness/reports.hpp"
#include "msbench/harness/retrieval.hpp"
#include "msbench/harness/scoring.hpp"
#include "msbench/metadata/metadata.hpp"
#include "msbench/modelcomp/cd_svg.hpp"
#include "msbench/modelcomp/comparison.hpp"
#include "msbench/splits/diagnostics.hpp"
#include "msbench/splits/split.hpp"

namespace msbench::harness {

struct GlobalOptions {
  std::uint64_t seed = 0;
  double resolution = 1.0;
  double max_mz = spectra::kDefaultMaxMz;
  double tau = metrics::kDefaultTau;
  unsigned threads = 1;
  std::string out;  // output directory; empty = primary output on stdout
};

// Where a command's files go. Without an output directory only the primary
// output is produced, on `stdout`; secondary outputs need a directory.
class Output {
 public:
  Output(std::string dir, std::ostream& stdout_stream, std::ostream& log)
      : dir_(std::move(dir)), stdout_(stdout_stream), log_(log) {
    if (!dir_.empty()) {
      std::error_code ec;
      std::filesystem::create_directories(dir_, ec);
      if (ec) throw DataError("cannot create output directory '" + dir_ + "': " + ec.message());
    }
  }

  void primary(const std::string& name, const std::function<void(std::ostream&)>& write) {
    if (dir_.empty()) {
      write(stdout_);
      stdout_.flush();
      return;
    }
    secondary(name, write);
  }

  void secondary(const std::string& name, const std::function<void(std::ostream&)>& write) {
    if (dir_.empty()) return;
    to_file((std::filesystem::path(dir_) / name).string(), write);
  }

  static void to_file(const std::string& path, const std::function<void(std::ostream&)>& write) {
    std::ofstream f(path);
    if (!f) throw DataError("cannot write '" + path + "'");
    write(f);
    if (!f) throw DataError("error writing '" + path + "'");
  }

  std::ostream& log() { return log_; }

 private:
  std::string dir_;
  std::ostream& stdout_;
  std::ostream& log_;
};

// Opens `path` and runs `read` on it, prefixing data errors with the path.
template <typename Fn>
auto read_file(const std::string& path, Fn&& read) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "'");
  try {
    return read(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

inline Dataset read_dataset(const std::string& path, Output& out, const std::string& rejects_name,
                            const LoadOptions& options = {}) {
  auto d = read_file(path, [&](std::istream& in) { return load_dataset(in, options); });
  if (!d.quarantined.empty() || d.skipped) {
    out.log() << path << ": " << d.records.size() << " records, " << d.quarantined.size() << " quarantined, "
              << d.skipped << " skipped\n";
    out.secondary(rejects_name, [&](std::ostream& o) { write_quarantine_tsv(o, d); });
  }
  return d;
}

inline Json dataset_counters(const Dataset& d) {
  return Json{{"records", d.records.size()},
              {"quarantined", d.quarantined.size()},
              {"skipped", d.skipped},
              {"total", d.total()}};
}

inline Json binning_config(const GlobalOptions& g) {
  return Json{{"resolution", number(g.resolution)}, {"max_mz", number(g.max_mz)}};
}

inline void emit_report(Output& out, const std::string& command, const Json& report, const Aggregates& aggregates) {
  out.primary(command + "_report.json", [&](std::ostream& o) { o << report.dump(2) << '\n'; });
  out.secondary(command + "_aggregates.tsv", [&](std::ostream& o) { write_aggregates_tsv(o, aggregates); });
}

// ---- split ----

struct SplitCommand {
  std::string dataset;
  std::string strategy = "random";
  std::vector<double> ratios = {0.8, 0.1, 0.1};
};

inline splits::Ratios ratios_from(const std::vector<double>& r) {
  if (r.size() != 3) throw UsageError("expected three ratios (train, val, test)");
  splits::Ratios out{r[0], r[1], r[2]};
  out.validate();
  return out;
}

inline void cmd_split(const GlobalOptions& g, const SplitCommand& c, Output& out) {
  const auto ratios = ratios_from(c.ratios);
  const auto strategy = splits::strategy_from_string(c.strategy);
  if (strategy == splits::Strategy::External) throw UsageError("strategy must be 'random' or 'scaffold'");
  const auto d = read_dataset(c.dataset, out, "split_rejects.tsv");
  splits::SplitAssignment split;
  if (strategy == splits::Strategy::Random) {
    std::set<std::string> keys;
    for (const auto& r : d.records) keys.insert(r.molecule_key);
    split = splits::random_split({keys.begin(), keys.end()}, ratios, g.seed);
  } else {
    std::vector<splits::ScaffoldedMolecule> mols;
    for (const auto& [key, f] : molecule_features(d)) mols.push_back({key, f.scaffold});
    split = splits::scaffold_split(mols, ratios, g.seed);
  }
  out.primary("split.tsv", [&](std::ostream& o) { splits::write_split_tsv(o, split); });
  const auto sizes = split.sizes();
  out.log() << "split (" << splits::to_string(strategy) << "): train " << sizes[0] << ", val " << sizes[1]
            << ", test " << sizes[2] << " molecules\n";
  for (const auto& w : split.warnings) out.log() << "warning: " << w << '\n';
}

// ---- diagnose ----

struct DiagnoseCommand {
  std::string dataset;
  std::string split;
  std::size_t n_pairs = splits::kDefaultPairs;
  FingerprintOptions fingerprint;
};

inline Json cmd_diagnose(const GlobalOptions& g, const DiagnoseCommand& c, Output& out) {
  const auto d = read_dataset(c.dataset, out, "diagnose_rejects.tsv");
  const auto split = read_file(c.split, [](std::istream& in) { return splits::read_split_tsv(in); });
  std::vector<std::pair<std::string, spectra::Spectrum>> spectra_by_key;
  for (const auto& r : d.records) spectra_by_key.emplace_back(r.molecule_key, r.spectrum);
  const auto diag = splits::diagnose_split(molecule_features(d, c.fingerprint), spectra_by_key, split,
                                           {c.n_pairs, g.seed, g.threads});
  const Json config = {{"dataset", c.dataset},
                       {"split", c.split},
                       {"n_pairs", c.n_pairs},
                       {"radius", c.fingerprint.radius},
                       {"bits", c.fingerprint.bits}};
  auto report = report_header("diagnose", g.seed, config);
  report["counters"] = dataset_counters(d);
  report["diagnostics"] = diagnostics_json(diag);
  emit_report(out, "diagnose", report, diagnostics_aggregates(diag));
  for (const auto& w : diag.warnings) out.log() << "warning: " << w << '\n';
  return report;
}

// ---- bin ----

struct BinCommand {
  std::string dataset;
};

// Writes the ground-truth spectra as a prediction file.
inline void cmd_bin(const GlobalOptions& g, const BinCommand& c, Output& out) {
  LoadOptions lo;
  lo.require_smiles = false;
  const auto d = read_dataset(c.dataset, out, "bin_rejects.tsv", lo);
  std::size_t dropped = 0;
  out.primary("binned.tsv", [&](std::ostream& o) {
    write_prediction_header(o, g.resolution, g.max_mz);
    for (const auto& r : d.records) {
      const auto b = spectra::bin_spectrum(r.spectrum, g.resolution, g.max_mz);
      dropped += b.dropped_peak_count;
      write_prediction_row(o, PredictionRow::from_dense(r.record_id, b.values));
    }
  });
  out.log() << "binned " << d.records.size() << " spectra into " << spectra::bin_count(g.resolution, g.max_mz)
            << " bins; " << dropped << " peaks beyond max m/z dropped\n";
}

// ---- score ----

struct ScoreCommand {
  std::string dataset;
  std::string predictions;
};

inline Json cmd_score(const GlobalOptions& g, const ScoreCommand& c, Output& out) {
  LoadOptions lo;
  lo.require_smiles = false;
  const auto d = read_dataset(c.dataset, out, "score_rejects.tsv", lo);
  const auto p =
      read_file(c.predictions, [&](std::istream& in) { return read_predictions(in, g.resolution, g.max_mz); });
  const auto run = score_predictions(d, p, {g.resolution, g.max_mz, g.tau, g.threads});
  Json config = {{"dataset", c.dataset}, {"predictions", c.predictions}};
  config.update(binning_config(g));
  config["tau"] = number(g.tau);
  auto report = report_header("score", g.seed, config);
  auto counters = dataset_counters(d);
  counters["missing_predictions"] = run.missing_predictions;
  counters["dropped_peaks"] = run.dropped_peaks;
  report["counters"] = counters;
  report.update(score_json(run));
  emit_report(out, "score", report, score_aggregates(run));
  out.log() << "scored " << run.records.size() << " records (" << run.missing_predictions
            << " without prediction): cosine " << text::format_number(run.cosine.mean) << ", JS "
            << text::format_number(run.js_similarity.mean) << ", coverage " << text::format_number(run.coverage.mean)
            << '\n';
  return report;
}

// ---- retrieve ----

struct RetrieveCommand {
  std::string queries;
  std::string candidates;
  std::string predictions;
  std::string merge = "sum";
};

inline Json cmd_retrieve(const GlobalOptions& g, const RetrieveCommand& c, Output& out) {
  const auto merge = merge_mode_from_string(c.merge);
  LoadOptions lo;
  lo.require_smiles = false;
  const auto q = read_dataset(c.queries, out, "retrieve_rejects.tsv", lo);
  const auto cands = read_file(c.candidates, [](std::istream& in) { return read_candidates(in); });
  const auto p =
      read_file(c.predictions, [&](std::istream& in) { return read_predictions(in, g.resolution, g.max_mz); });
  const auto run = run_retrieval(q, cands, p.rows, {g.resolution, g.max_mz, merge, g.threads});
  Json config = {{"queries", c.queries}, {"candidates", c.candidates}, {"predictions", c.predictions}};
  config.update(binning_config(g));
  config["merge"] = to_string(merge);
  auto report = report_header("retrieve", g.seed, config);
  auto counters = dataset_counters(q);
  counters["candidate_rows"] = cands.size();
  counters["invalid_candidates"] = run.invalid_candidates;
  counters["duplicate_candidates"] = run.duplicate_candidates;
  counters["merged_predictions"] = run.merged_predictions;
  counters["dropped_queries"] = run.dropped.size();
  report["counters"] = counters;
  report.update(retrieval_json(run));
  emit_report(out, "retrieve", report, retrieval_aggregates_rows(run));
  out.log() << "ranked " << run.queries.size() << " queries (" << run.dropped.size() << " dropped): top-1 "
            << text::format_number(run.aggregates.top1) << ", mean rank " << text::format_number(run.aggregates.mean_rank)
            << '\n';
  return report;
}

// ---- compare ----

struct CompareCommand {
  std::string scores;
  double alpha = 0.05;
  std::string direction = "higher_better";
  std::string svg;  // optional explicit path
};

inline Json cmd_compare(const GlobalOptions& g, const CompareCommand& c, Output& out) {
  if (!(c.alpha > 0 && c.alpha < 1)) throw UsageError("alpha must lie in (0, 1)");
  const auto direction = modelcomp::direction_from_string(c.direction);
  const auto m = read_file(c.scores, [&](std::istream& in) { return modelcomp::read_score_matrix(in, direction); });
  const auto r = modelcomp::compare_models(m, c.alpha);
  const Json config = {{"scores", c.scores}, {"alpha", number(c.alpha)}, {"direction", modelcomp::to_string(direction)}};
  auto report = report_header("compare", g.seed, config);
  report["comparison"] = comparison_json(r);
  emit_report(out, "compare", report, comparison_aggregates(r));
  auto svg = [&](std::ostream& o) { modelcomp::write_cd_svg(o, r); };
  out.secondary("cd_diagram.svg", svg);
  if (!c.svg.empty()) Output::to_file(c.svg, svg);
  if (r.friedman) {
    out.log() << "Friedman chi2 " << text::format_number(r.friedman->statistic) << ", log10 p "
              << text::format_number(r.friedman->log10_p) << "; " << r.cliques.size() << " clique(s)\n";
  }
  return report;
}

// ---- baseline ----

struct BaselineCommand {
  std::string train;
  std::string queries;     // dataset TSV
  std::string candidates;  // or candidate TSV; predictions keyed by candidate id
  FingerprintOptions fingerprint;
};

inline void cmd_baseline(const GlobalOptions& g, const BaselineCommand& c, Output& out) {
  if (c.queries.empty() == c.candidates.empty()) throw UsageError("give exactly one of --queries or --candidates");
  const auto train = read_dataset(c.train, out, "baseline_train_rejects.tsv");
  std::vector<BaselineQuery> queries;
  std::size_t unusable = 0;
  if (!c.queries.empty()) {
    const auto q = read_dataset(c.queries, out, "baseline_query_rejects.tsv");
    for (const auto& r : q.records) queries.push_back({r.record_id, r.smiles});
    unusable = q.quarantined.size();
  } else {
    const auto rows = read_file(c.candidates, [](std::istream& in) { return read_candidates(in); });
    std::map<std::string, std::string> unique;
    for (const auto& r : rows) unique.emplace(r.candidate_id, r.smiles);
    for (const auto& [id, smiles] : unique) {
      try {
        mol::parse_smiles(smiles);
        queries.push_back({id, smiles});
      } catch (const Error&) {
        ++unusable;
      }
    }
  }
  std::vector<BaselineMatch> matches;
  const auto pred =
      baseline_nn_predict(train, queries, {c.fingerprint, g.resolution, g.max_mz, g.threads}, &matches);
  out.primary("predictions.tsv", [&](std::ostream& o) {
    write_prediction_header(o, g.resolution, g.max_mz);
    for (const auto& p : pred) write_prediction_row(o, p);
  });
  out.secondary("baseline_matches.tsv", [&](std::ostream& o) {
    o << "query_id\ttrain_record_id\ttanimoto\n";
    for (const auto& m : matches) o << m.query_id << '\t' << m.train_record_id << '\t' << text::format_number(m.tanimoto) << '\n';
  });
  out.log() << "baseline: " << pred.size() << " predictions from " << train.records.size() << " training records; "
            << unusable << " queries without a usable structure\n";
}

// ---- import-mgf / import-msp ----

struct ImportCommand {
  std::string input;
  bool msp = false;
};

inline void cmd_import(const GlobalOptions&, const ImportCommand& c, Output& out) {
  const auto r = read_file(c.input, [&](std::istream& in) {
    return import_library(c.msp ? spectra::parse_msp(in) : spectra::parse_mgf(in));
  });
  out.primary("dataset.tsv", [&](std::ostream& o) { write_dataset_tsv(o, r.records); });
  out.secondary("import_diagnostics.tsv", [&](std::ostream& o) {
    o << "line\tmessage\n";
    for (const auto& d : r.diagnostics) o << d.line << '\t' << d.message << '\n';
  });
  out.log() << c.input << ": imported " << r.records.size() << " records, skipped " << r.skipped << '\n';
}

// ---- candidates ----

struct CandidatesCommand {
  std::string queries;
  std::string library;
  double ppm = 10;
  std::size_t cap = kDefaultCandidateCap;
  std::string default_adduct = "[M+H]+";
};

inline void cmd_candidates(const GlobalOptions&, const CandidatesCommand& c, Output& out) {
  LoadOptions lo;
  lo.require_smiles = false;
  const auto q = read_dataset(c.queries, out, "candidates_rejects.tsv", lo);
  const auto lib = read_file(c.library, [](std::istream& in) { return read_compound_library(in); });
  std::vector<CandidateRow> rows;
  std::size_t skipped = 0;
  for (const auto& r : q.records) {
    const auto mz = r.metadata.precursor_mz;
    if (!mz) {
      ++skipped;
      out.log() << "query '" << r.record_id << "': no precursor m/z, skipped\n";
      continue;
    }
    const auto adduct = adduct_from_string(r.metadata.precursor_type.value_or(c.default_adduct));
    for (const auto* hit : candidates_by_mass(lib, neutral_mass(*mz, adduct), c.ppm, c.cap)) {
      rows.push_back({r.record_id, hit->id, hit->smiles, 0});
    }
  }
  out.primary("candidates.tsv", [&](std::ostream& o) { write_candidates(o, rows); });
  out.log() << rows.size() << " candidates for " << q.records.size() - skipped << " queries from "
            << lib.compounds.size() << " compounds (" << lib.rejected << " unparseable)\n";
}

// ---- embed ----

struct EmbedCommand {
  std::string train;
  std::string dataset;  // defaults to the training file
  std::string metadata_config;
};

inline void cmd_embed(const GlobalOptions&, const EmbedCommand& c, Output& out) {
  LoadOptions lo;
  lo.require_smiles = false;
  const auto train = read_dataset(c.train, out, "embed_train_rejects.tsv", lo);
  metadata::MetadataConfig config;
  if (!c.metadata_config.empty()) {
    config = read_file(c.metadata_config, [](std::istream& in) {
      try {
        return metadata::config_from_json(nlohmann::json::parse(in));
      } catch (const nlohmann::json::parse_error& e) {
        throw ParseError(e.what(), 0, e.byte);
      }
    });
  }
  std::vector<metadata::MetadataRecord> train_meta;
  for (const auto& r : train.records) train_meta.push_back(r.metadata);
  const auto stats = metadata::fit_metadata_stats(train_meta, config);
  const auto target = c.dataset.empty() ? train : read_dataset(c.dataset, out, "embed_rejects.tsv", lo);
  std::vector<metadata::MetadataRecord> meta;
  for (const auto& r : target.records) meta.push_back(r.metadata);
  const auto vectors = metadata::embed_dataset(meta, stats);
  out.primary("embeddings.tsv", [&](std::ostream& o) {
    o << "record_id\tembedding\n";
    for (std::size_t i = 0; i < vectors.size(); ++i) {
      o << target.records[i].record_id << '\t';
      for (std::size_t k = 0; k < vectors[i].values.size(); ++k) {
        o << (k ? "," : "") << text::format_number(vectors[i].values[k]);
      }
      o << '\n';
    }
  });
  out.secondary("metadata_stats.json", [&](std::ostream& o) { o << metadata::to_json(stats).dump(2) << '\n'; });
  out.log() << "embedded " << vectors.size() << " records, "
            << (vectors.empty() ? 0 : vectors.front().values.size()) << " values each\n";
}

}  // namespace msbench::harness
