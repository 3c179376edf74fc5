#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "msbench/fingerprint/morgan.hpp"
#include "msbench/harness/baseline.hpp"
#include "msbench/harness/candidates.hpp"
#include "msbench/harness/dataset.hpp"
#include "msbench/harness/import.hpp"
#include "msbench/harness/predictions.hpp"
#include "msbench/harness/reports.hpp"
#include "msbench/harness/retrieval.hpp"
#include "msbench/harness/scoring.hpp"
#include "msbench/mol/smiles_parser.hpp"
#include "msbench/rng.hpp"
#include "support/test_util.hpp"

namespace {

using namespace msbench;
using namespace msbench::harness;

const std::string kHeader = "record_id\tsmiles\tace\tnce\tinstrument_type\tprecursor_type\tion_mode\tprecursor_mz\tpeaks\n";

Dataset dataset_from(const std::string& body) {
  std::istringstream in(kHeader + body);
  return load_dataset(in);
}

std::string row(const std::string& id, const std::string& smiles, const std::string& peaks) {
  return id + "\t" + smiles + "\t\t\t\t\t\t\t" + peaks + "\n";
}

TEST(Dataset, FixtureAccounting) {
  std::ifstream in(msbench::testing::data_path("spectra/dataset.tsv"));
  const auto d = load_dataset(in);
  EXPECT_EQ(d.records.size(), 3U);
  EXPECT_EQ(d.skipped, 3U);
  EXPECT_TRUE(d.quarantined.empty());
  EXPECT_EQ(d.total(), 6U);
  EXPECT_EQ(d.records[0].molecule_key, molecule_key("OCC"));
}

TEST(Dataset, BadSmilesAndMetadataAreQuarantined) {
  const auto d = dataset_from(row("a", "CCO", "10:1") + row("b", "C1CC", "10:1") + row("c", "NA", "10:1") +
                              "d\tCC\t-5\t\t\t\t\t\t10:1\n");
  ASSERT_EQ(d.records.size(), 1U);
  ASSERT_EQ(d.quarantined.size(), 3U);
  EXPECT_EQ(d.quarantined[0].record_id, "b");
  EXPECT_EQ(d.quarantined[1].reason, "missing SMILES");
  EXPECT_EQ(d.quarantined[2].record_id, "d");
  std::ostringstream q;
  write_quarantine_tsv(q, d);
  EXPECT_NE(q.str().find("b\t3\t"), std::string::npos);
}

TEST(Dataset, AccountingHoldsOnRandomInputs) {
  const std::vector<std::string> good = {"CCO", "c1ccccc1", "CC(=O)O", "N#CC", "C1CCNCC1"};
  const std::vector<std::string> bad_smiles = {"C1CC", "Xx", "C(C", ""};
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    std::string body;
    const auto n = 1 + rng.uniform_index(30);
    for (std::uint64_t i = 0; i < n; ++i) {
      const std::string id = "r" + std::to_string(i);
      switch (rng.uniform_index(4)) {
        case 0: body += row(id, bad_smiles[rng.uniform_index(bad_smiles.size())], "10:1"); break;
        case 1: body += row(id, good[rng.uniform_index(good.size())], "10:x"); break;  // unreadable peaks
        case 2: body += id + "\tCC\n"; break;                                          // short row
        default: body += row(id, good[rng.uniform_index(good.size())], "10:1 20:2"); break;
      }
    }
    const auto d = dataset_from(body);
    EXPECT_EQ(d.records.size() + d.quarantined.size() + d.skipped, n);
  }
}

TEST(Dataset, WriteThenReadRoundTrips) {
  const auto d = dataset_from("x\tCCO\t20\t35\tQTOF\t[M+H]+\tpositive\t47.05\t29.5:100 31:45.5\n");
  std::ostringstream out;
  write_dataset_tsv(out, d.records);
  std::istringstream in(out.str());
  const auto back = load_dataset(in);
  ASSERT_EQ(back.records.size(), 1U);
  EXPECT_EQ(back.records[0].metadata.nce, 35.0);
  EXPECT_EQ(back.records[0].metadata.instrument_type, "QTOF");
  EXPECT_EQ(back.records[0].spectrum.peaks(), d.records[0].spectrum.peaks());
}

TEST(Predictions, SparseRoundTripIsLossless) {
  Rng rng(3);
  std::vector<PredictionRow> rows;
  for (int i = 0; i < 20; ++i) {
    std::vector<double> v(1000, 0.0);
    for (int k = 0; k < 15; ++k) v[rng.uniform_index(1000)] = rng.uniform01() * 1e3;
    rows.push_back(PredictionRow::from_dense("p" + std::to_string(i), v));
  }
  std::ostringstream out;
  write_prediction_header(out, 1.0, 1000.0);
  for (const auto& r : rows) write_prediction_row(out, r);
  std::istringstream in(out.str());
  const auto back = read_predictions(in, 1.0, 1000.0);
  ASSERT_EQ(back.rows.size(), rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    EXPECT_EQ(back.rows[i].record_id, rows[i].record_id);
    EXPECT_EQ(back.rows[i].entries, rows[i].entries);
  }
}

TEST(Predictions, DenseAndSparseRowsAgree) {
  std::istringstream in("a\t0,1.5,0,2\nb\t3:2 1:1.5\nc\t\n");
  const auto p = read_predictions(in, 250.0, 1000.0);  // 4 bins
  ASSERT_EQ(p.rows.size(), 3U);
  EXPECT_EQ(p.rows[0].dense(), (std::vector<double>{0, 1.5, 0, 2}));
  EXPECT_EQ(p.rows[1].dense(), p.rows[0].dense());
  EXPECT_EQ(p.rows[2].dense(), std::vector<double>(4, 0.0));
}

TEST(Predictions, Errors) {
  auto read = [](const std::string& s) {
    std::istringstream in(s);
    return read_predictions(in, 250.0, 1000.0);
  };
  EXPECT_THROW(read("# resolution=0.5 max_mz=1000\n"), DataError);
  EXPECT_THROW(read("# resolution=250 max_mz=500\n"), DataError);
  try {
    read("a\t1:1\nb\t4:1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2U);
  }
  EXPECT_THROW(read("a\t1,2,3\n"), ParseError);
  EXPECT_THROW(read("a\t1:-1\n"), ParseError);
  EXPECT_THROW(read("a\t1:1 1:2\n"), ParseError);
  EXPECT_NO_THROW(read("# resolution=250 max_mz=1000\na\t1:1\n"));
}

Dataset toy_truth() {
  return dataset_from(row("a", "CCO", "10.2:100 20.5:50") + row("b", "CCN", "30:10 40:90 41:1") +
                      row("c", "CCC", "5:1") + row("d", "CCCl", "99:3 100:4"));
}

PredictionFile predictions_from(const Dataset& d, const std::vector<std::string>& ids, double resolution = 1.0) {
  PredictionFile p;
  for (const auto& r : d.records) {
    if (std::find(ids.begin(), ids.end(), r.record_id) == ids.end()) continue;
    p.rows.push_back(PredictionRow::from_dense(r.record_id, spectra::bin_spectrum(r.spectrum, resolution).values));
  }
  return p;
}

TEST(Score, IdenticalPredictionsGiveExactlyOne) {
  const auto truth = toy_truth();
  const auto run = score_predictions(truth, predictions_from(truth, {"a", "b", "c", "d"}), {});
  EXPECT_EQ(run.cosine.mean, 1.0);
  EXPECT_EQ(run.js_similarity.mean, 1.0);
  EXPECT_EQ(run.coverage.mean, 1.0);
  EXPECT_EQ(run.missing_predictions, 0U);
}

TEST(Score, AllZeroPredictions) {
  const auto truth = toy_truth();
  PredictionFile p;
  for (const auto& r : truth.records) p.rows.push_back({r.record_id, 1000, {}, 0});
  const auto run = score_predictions(truth, p, {});
  EXPECT_EQ(run.cosine.mean, 0.0);
  EXPECT_EQ(run.coverage.mean, 0.0);
  EXPECT_EQ(run.coverage.count, 4U);
}

TEST(Score, MissingPredictionsAreCountedAndExcluded) {
  const auto truth = toy_truth();
  const auto run = score_predictions(truth, predictions_from(truth, {"b", "d"}), {});
  EXPECT_EQ(run.missing_predictions, 2U);
  EXPECT_EQ(run.records.size(), 2U);
  EXPECT_EQ(run.cosine.mean, 1.0);
}

TEST(Score, AggregatesAreMeansOfRecords) {
  const auto truth = toy_truth();
  auto p = predictions_from(truth, {"a", "b", "c", "d"});
  std::swap(p.rows[0].record_id, p.rows[1].record_id);
  const auto run = score_predictions(truth, p, {});
  double sum = 0;
  for (const auto& r : run.records) sum += r.score.cosine;
  EXPECT_DOUBLE_EQ(run.cosine.mean, sum / run.records.size());
  EXPECT_LT(run.cosine.mean, 1.0);
}

TEST(Score, UnknownOrRepeatedIdsAreErrors) {
  const auto truth = toy_truth();
  auto p = predictions_from(truth, {"a"});
  p.rows.push_back(p.rows[0]);
  EXPECT_THROW(score_predictions(truth, p, {}), DataError);
  p.rows.back().record_id = "zz";
  EXPECT_THROW(score_predictions(truth, p, {}), DataError);
}

TEST(Score, ThreadCountDoesNotChangeResults) {
  const auto truth = toy_truth();
  auto p = predictions_from(truth, {"a", "b", "c", "d"});
  std::rotate(p.rows.begin(), p.rows.begin() + 1, p.rows.end());
  for (auto& r : p.rows) r.record_id = r.record_id == "a" ? "d" : std::string(1, static_cast<char>(r.record_id[0] - 1));
  ScoreOptions one, four;
  four.threads = 4;
  EXPECT_EQ(score_json(score_predictions(truth, p, one)).dump(), score_json(score_predictions(truth, p, four)).dump());
}

TEST(Baseline, IdenticalMoleculeWithOtherIdGivesItsSpectrum) {
  const auto train = toy_truth();
  std::vector<PredictionRow> pred = baseline_nn_predict(train, {{"q", "OCC"}}, {});
  ASSERT_EQ(pred.size(), 1U);
  const auto truth = spectra::bin_spectrum(train.records[0].spectrum, 1.0).values;
  EXPECT_EQ(metrics::cosine_similarity(pred[0].dense(), truth), 1.0);
}

TEST(Baseline, ZeroSimilarityFallsToFirstInTieOrder) {
  const auto train = dataset_from(row("z", "CCCC", "1:1") + row("y", "CCCCC", "2:1"));
  std::vector<BaselineMatch> m;
  baseline_nn_predict(train, {{"q", "[Na+].[Cl-]"}}, {}, &m);
  ASSERT_EQ(m.size(), 1U);
  EXPECT_EQ(m[0].tanimoto, 0.0);
  // Tie-break by molecule key, then record id.
  const std::string first = molecule_key("CCCC") < molecule_key("CCCCC") ? "z" : "y";
  EXPECT_EQ(m[0].train_record_id, first);
}

TEST(Baseline, LeaveOneOutMatchesBruteForce) {
  const auto train = dataset_from(row("m1", "c1ccccc1O", "1:1") + row("m2", "c1ccccc1N", "2:1") +
                                  row("m3", "CCCCCCO", "3:1"));
  std::vector<BaselineQuery> queries;
  for (const auto& r : train.records) queries.push_back({r.record_id, r.smiles});
  std::vector<BaselineMatch> matches;
  const auto pred = baseline_nn_predict(train, queries, {}, &matches);
  for (std::size_t q = 0; q < queries.size(); ++q) {
    const auto fq = fp::morgan_fingerprint(mol::parse_smiles(queries[q].smiles));
    std::string best;
    double best_t = -1;
    std::string best_key;
    for (const auto& r : train.records) {
      if (r.record_id == queries[q].id) continue;
      const double t = fp::tanimoto(fq, fp::morgan_fingerprint(mol::parse_smiles(r.smiles)));
      if (t > best_t || (t == best_t && std::tie(r.molecule_key, r.record_id) < std::tie(best_key, best))) {
        best_t = t;
        best = r.record_id;
        best_key = r.molecule_key;
      }
    }
    EXPECT_EQ(matches[q].train_record_id, best) << queries[q].id;
    EXPECT_EQ(matches[q].tanimoto, best_t);
    EXPECT_NE(matches[q].train_record_id, queries[q].id);
  }
}

TEST(Candidates, MonoisotopicMasses) {
  EXPECT_NEAR(monoisotopic_mass(mol::parse_smiles("Cn1c(=O)c2c(ncn2C)n(C)c1=O")), 194.080376, 1e-6);
  EXPECT_NEAR(monoisotopic_mass(mol::parse_smiles("O")), 18.010565, 1e-6);
  EXPECT_NEAR(monoisotopic_mass(mol::parse_smiles("[NH4+]")), 18.033826, 1e-6);
  EXPECT_NEAR(monoisotopic_mass(mol::parse_smiles("[13CH4]")), 17.034655, 1e-6);
  EXPECT_NEAR(monoisotopic_mass(mol::parse_smiles("ClC(Cl)Cl")), 117.914383, 1e-6);
  EXPECT_NEAR(neutral_mass(195.087652, adduct_from_string("[M+H]+")), 194.080376, 1e-6);
  EXPECT_NEAR(neutral_mass(193.073100, adduct_from_string("[M-H]-")), 194.080376, 1e-6);
  EXPECT_THROW(adduct_from_string("[M+Xx]+"), DataError);
}

TEST(Candidates, MassWindowAndCap) {
  std::istringstream in("compound_id\tsmiles\nc1\tCn1c(=O)c2c(ncn2C)n(C)c1=O\nc2\tCCO\nbad\tC1CC\n"
                        "c3\tCn1cnc2c1c(=O)n(C)c(=O)n2C\nc4\tCC(=O)O\n");
  const auto lib = read_compound_library(in);
  EXPECT_EQ(lib.compounds.size(), 4U);
  EXPECT_EQ(lib.rejected, 1U);
  const auto hits = candidates_by_mass(lib, 194.0804, 10);
  ASSERT_EQ(hits.size(), 2U);
  EXPECT_EQ(hits[0]->id, "c1");
  EXPECT_EQ(hits[1]->id, "c3");
  EXPECT_EQ(candidates_by_mass(lib, 194.0804, 10, 1).size(), 1U);
  EXPECT_TRUE(candidates_by_mass(lib, 194.1, 10).empty());
  EXPECT_THROW(candidates_by_mass(lib, 194.0, 0), UsageError);
}

TEST(Import, MgfFieldsMapOntoDataset) {
  std::ifstream in(msbench::testing::data_path("spectra/library.mgf"));
  const auto r = import_library(spectra::parse_mgf(in));
  ASSERT_FALSE(r.records.empty());
  const auto& caffeine = r.records[0];
  EXPECT_EQ(caffeine.record_id, "caffeine_hcd20");
  EXPECT_EQ(caffeine.smiles, "Cn1c(=O)c2c(ncn2C)n(C)c1=O");
  EXPECT_EQ(caffeine.metadata.ace, 20.0);
  EXPECT_EQ(caffeine.metadata.ion_mode, "positive");
  EXPECT_EQ(r.records.size() + r.skipped, 4U + 1U);
}

TEST(Import, CollisionEnergyForms) {
  EXPECT_EQ(parse_collision_energy("35", false).ace, 35.0);
  EXPECT_EQ(parse_collision_energy("35 eV", false).ace, 35.0);
  EXPECT_EQ(parse_collision_energy("35%", false).nce, 35.0);
  EXPECT_EQ(parse_collision_energy("NCE=35", false).nce, 35.0);
  EXPECT_EQ(parse_collision_energy("35", true).nce, 35.0);
  const auto ramp = parse_collision_energy("20-40", false);
  EXPECT_FALSE(ramp.ace || ramp.nce);
}

// Synthetic contest: spectra are single peaks at distinct bins, so any two
// different peaks are orthogonal.
struct Contest {
  Dataset queries;
  std::vector<CandidateRow> candidates;
  std::vector<PredictionRow> predictions;
};

std::string chain(std::size_t n) {
  std::string s = "C";
  for (std::size_t i = 0; i < n; ++i) s += i % 3 == 2 ? "N" : "C";
  return s;
}

Contest small_contest(std::size_t n_queries, std::size_t n_candidates) {
  Contest c;
  std::string body;
  for (std::size_t q = 0; q < n_queries; ++q) {
    const std::string qid = "q" + std::to_string(q);
    body += qid + "\tCC\t\t\t\t\t\t\t" + std::to_string(10 + q) + ":1\t" + qid + "_c0\n";
    for (std::size_t k = 0; k < n_candidates; ++k) {
      const std::string cid = qid + "_c" + std::to_string(k);
      c.candidates.push_back({qid, cid, chain(k), 0});
      PredictionRow p{cid, 1000, {}, 0};
      p.entries.emplace_back(static_cast<std::uint32_t>(k == 0 ? 10 + q : 500 + k), 1.0);
      c.predictions.push_back(p);
    }
  }
  std::istringstream in(kHeader.substr(0, kHeader.size() - 1) + "\ttrue_candidate_id\n" + body);
  c.queries = load_dataset(in);
  return c;
}

TEST(Retrieve, PlantedMatchesRankFirst) {
  const auto c = small_contest(6, 12);
  const auto run = run_retrieval(c.queries, c.candidates, c.predictions, {});
  ASSERT_EQ(run.queries.size(), 6U);
  EXPECT_EQ(run.aggregates.mean_rank, 0.0);
  EXPECT_EQ(run.aggregates.top1, 1.0);
  for (const auto& q : run.queries) {
    EXPECT_EQ(q.true_score, 1.0);
    EXPECT_EQ(q.rank.total_candidates, 12U);
  }
  EXPECT_EQ(run.aggregates.histogram[0], 6U);
}

TEST(Retrieve, OrthogonalTruthWithMatchingDecoy) {
  auto c = small_contest(2, 5);
  // q0: true prediction moves off the query peak; decoy c3 takes it.
  c.predictions[0].entries = {{700, 1.0}};
  c.predictions[3].entries = {{10, 1.0}};
  const auto run = run_retrieval(c.queries, c.candidates, c.predictions, {});
  EXPECT_GE(run.queries[0].rank.rank, 1U);
  EXPECT_EQ(run.queries[0].rank.rank, 4U);  // every decoy scores >= 0
  EXPECT_EQ(run.queries[1].rank.rank, 0U);
  EXPECT_EQ(run.aggregates.top1, 0.5);
}

TEST(Retrieve, RowOrderDoesNotMatter) {
  auto c = small_contest(5, 9);
  c.predictions[0].entries = {{700, 1.0}};
  Rng rng(5);
  const auto base = retrieval_json(run_retrieval(c.queries, c.candidates, c.predictions, {})).dump();
  for (int t = 0; t < 5; ++t) {
    rng.shuffle(std::span<CandidateRow>(c.candidates));
    rng.shuffle(std::span<PredictionRow>(c.predictions));
    RetrieveOptions o;
    o.threads = 1 + t;
    EXPECT_EQ(retrieval_json(run_retrieval(c.queries, c.candidates, c.predictions, o)).dump(), base);
  }
}

TEST(Retrieve, DuplicateStructuresKeepTheTrueCandidate) {
  auto c = small_contest(1, 4);
  c.candidates.push_back({"q0", "a_dup", "C" + chain(0).substr(1), 0});  // same structure as q0_c0
  c.candidates.push_back({"q0", "a_dup2", chain(2), 0});                 // same as q0_c2, smaller id
  c.predictions.push_back({"a_dup", 1000, {{10, 1.0}}, 0});
  c.predictions.push_back({"a_dup2", 1000, {{900, 1.0}}, 0});
  const auto run = run_retrieval(c.queries, c.candidates, c.predictions, {});
  ASSERT_EQ(run.queries.size(), 1U);
  EXPECT_EQ(run.queries[0].rank.total_candidates, 4U);
  EXPECT_EQ(run.queries[0].duplicate_candidates, 2U);
  EXPECT_EQ(run.queries[0].rank.rank, 0U);
}

TEST(Retrieve, InvalidStructures) {
  auto c = small_contest(2, 4);
  c.candidates[1].smiles = "C1CC";  // q0 decoy
  c.candidates[4].smiles = "Xx";    // q1 true candidate
  const auto run = run_retrieval(c.queries, c.candidates, c.predictions, {});
  ASSERT_EQ(run.queries.size(), 1U);
  EXPECT_EQ(run.queries[0].rank.total_candidates, 3U);
  EXPECT_EQ(run.invalid_candidates, 1U);
  ASSERT_EQ(run.dropped.size(), 1U);
  EXPECT_EQ(run.dropped[0].query_id, "q1");
}

TEST(Retrieve, PreconditionViolationsAreErrors) {
  auto c = small_contest(1, 3);
  auto missing_pred = c.predictions;
  missing_pred.pop_back();
  EXPECT_THROW(run_retrieval(c.queries, c.candidates, missing_pred, {}), DataError);
  auto no_truth = c.candidates;
  no_truth.erase(no_truth.begin());
  EXPECT_THROW(run_retrieval(c.queries, no_truth, c.predictions, {}), DataError);
}

TEST(Retrieve, QueryScopedPredictionWins) {
  auto c = small_contest(1, 3);
  c.predictions[0].entries = {{700, 1.0}};
  c.predictions.push_back({"q0/q0_c0", 1000, {{10, 1.0}}, 0});
  const auto run = run_retrieval(c.queries, c.candidates, c.predictions, {});
  EXPECT_EQ(run.queries[0].rank.rank, 0U);
}

TEST(Retrieve, MergeAcrossCollisionEnergies) {
  std::vector<PredictionRow> rows = {{"x", 4, {{0, 1.0}, {2, 3.0}}, 1}, {"x", 4, {{0, 2.0}, {1, 1.0}}, 2}};
  std::size_t merged = 0;
  const auto sum = merge_predictions(rows, MergeMode::Sum, &merged);
  EXPECT_EQ(merged, 1U);
  EXPECT_EQ(sum.at("x").dense(), (std::vector<double>{3, 1, 3, 0}));
  const auto max = merge_predictions(rows, MergeMode::Max);
  EXPECT_EQ(max.at("x").dense(), (std::vector<double>{2, 1, 3, 0}));
  EXPECT_THROW(merge_mode_from_string("mean"), UsageError);
}

TEST(Retrieve, SparseCosineMatchesDense) {
  Rng rng(9);
  for (int t = 0; t < 100; ++t) {
    std::vector<double> q(200, 0.0), p(200, 0.0);
    for (int k = 0; k < 10; ++k) {
      q[rng.uniform_index(200)] = rng.uniform01() * 100;
      p[rng.uniform_index(200)] = rng.uniform01() * 100;
    }
    const auto ql = spectra::log1p_transform(q);
    EXPECT_NEAR(sparse_log1p_cosine(ql, PredictionRow::from_dense("p", p)),
                metrics::cosine_similarity(spectra::log1p_transform(p), ql), 1e-12);
  }
}

TEST(Reports, HeaderAndNumbers) {
  const Json config = {{"resolution", 1.0}, {"tau", 0.01}};
  const auto h = report_header("score", 42, config);
  EXPECT_EQ(h["seed"], 42);
  EXPECT_EQ(h["config_hash"], config_hash(config));
  EXPECT_EQ(h["config_hash"].get<std::string>().size(), 16U);
  EXPECT_NE(config_hash(config), config_hash(Json{{"resolution", 0.5}, {"tau", 0.01}}));
  EXPECT_EQ(number(1.0 / 3.0).dump(), "0.333333333");
  EXPECT_EQ(number(-std::numeric_limits<double>::infinity()), "-inf");
  std::ostringstream tsv;
  write_aggregates_tsv(tsv, {{"cosine", 2.0 / 3.0}});
  EXPECT_EQ(tsv.str(), "metric\tvalue\ncosine\t0.666666667\n");
}

}  // namespace
