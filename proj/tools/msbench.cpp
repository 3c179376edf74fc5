// msbench command-line tool.

#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "msbench/error.hpp"
#include "msbench/harness/commands.hpp"

namespace {

using namespace msbench;
using namespace msbench::harness;

void add_fingerprint_flags(CLI::App* cmd, FingerprintOptions& fp) {
  cmd->add_option("--radius", fp.radius, "Morgan radius")->check(CLI::Range(0, 8));
  cmd->add_option("--bits", fp.bits, "Fingerprint length")->check(CLI::Range(1, 1 << 20));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Benchmark toolkit for mass-spectrum prediction", "msbench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));
  app.set_config("--config", "", "TOML/INI file with option defaults");

  GlobalOptions g;
  app.add_option("--seed", g.seed, "Master seed")->capture_default_str();
  app.add_option("--resolution", g.resolution, "Bin width in m/z")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--max-mz", g.max_mz, "Upper m/z bound for binning")->capture_default_str()->check(CLI::PositiveNumber);
  app.add_option("--tau", g.tau, "Spectral coverage threshold")->capture_default_str()->check(CLI::Range(0.0, 1.0));
  app.add_option("--threads", g.threads, "Worker threads (0 = all cores)")->capture_default_str();
  app.add_option("--out", g.out, "Output directory (default: primary output to stdout)");
  app.fallthrough();

  SplitCommand split;
  auto* s = app.add_subcommand("split", "Assign molecules to train/val/test");
  s->add_option("--dataset", split.dataset, "Dataset TSV")->required();
  s->add_option("--strategy", split.strategy, "random or scaffold")
      ->check(CLI::IsMember({"random", "scaffold"}))
      ->capture_default_str();
  s->add_option("--ratios", split.ratios, "train,val,test fractions")->delimiter(',')->expected(3);

  DiagnoseCommand diagnose;
  auto* d = app.add_subcommand("diagnose", "Distribution-shift diagnostics for a split");
  d->add_option("--dataset", diagnose.dataset, "Dataset TSV")->required();
  d->add_option("--split", diagnose.split, "Split TSV")->required();
  d->add_option("--n-pairs", diagnose.n_pairs, "Sampled Tanimoto pairs per set")->capture_default_str();
  add_fingerprint_flags(d, diagnose.fingerprint);

  BinCommand bin;
  auto* b = app.add_subcommand("bin", "Write dataset spectra as binned vectors");
  b->add_option("--dataset", bin.dataset, "Dataset TSV")->required();

  ScoreCommand score;
  auto* sc = app.add_subcommand("score", "Score predicted spectra against a dataset");
  sc->add_option("--dataset", score.dataset, "Ground-truth dataset TSV")->required();
  sc->add_option("--predictions", score.predictions, "Prediction TSV")->required();

  RetrieveCommand retrieve;
  auto* r = app.add_subcommand("retrieve", "Rank candidate structures for query spectra");
  r->add_option("--queries", retrieve.queries, "Query dataset TSV with a true_candidate_id column")->required();
  r->add_option("--candidates", retrieve.candidates, "Candidate TSV (query_id, candidate_id, smiles)")->required();
  r->add_option("--predictions", retrieve.predictions, "Candidate prediction TSV")->required();
  r->add_option("--merge", retrieve.merge, "How repeated prediction rows combine")
      ->check(CLI::IsMember({"sum", "max"}))
      ->capture_default_str();

  CompareCommand compare;
  auto* c = app.add_subcommand("compare", "Friedman/Wilcoxon-Holm comparison of models");
  c->add_option("--scores", compare.scores, "Score matrix TSV (condition x model)")->required();
  c->add_option("--alpha", compare.alpha, "Family-wise significance level")->capture_default_str();
  c->add_option("--direction", compare.direction, "higher_better or lower_better")
      ->check(CLI::IsMember({"higher_better", "lower_better", "higher", "lower"}))
      ->capture_default_str();
  c->add_option("--svg", compare.svg, "Write the critical-difference diagram here");

  BaselineCommand baseline;
  auto* bl = app.add_subcommand("baseline", "Nearest-neighbour reference predictions");
  bl->add_option("--train", baseline.train, "Training dataset TSV")->required();
  auto* bq = bl->add_option("--queries", baseline.queries, "Query dataset TSV");
  auto* bc = bl->add_option("--candidates", baseline.candidates, "Candidate TSV; predicts each candidate id");
  bq->excludes(bc);
  add_fingerprint_flags(bl, baseline.fingerprint);

  ImportCommand import_mgf, import_msp{"", true};
  auto* im = app.add_subcommand("import-mgf", "Convert an MGF library to a dataset TSV");
  im->add_option("input", import_mgf.input, "MGF file")->required();
  auto* ims = app.add_subcommand("import-msp", "Convert an MSP library to a dataset TSV");
  ims->add_option("input", import_msp.input, "MSP file")->required();

  CandidatesCommand candidates;
  auto* ca = app.add_subcommand("candidates", "Candidate structures by precursor mass");
  ca->add_option("--queries", candidates.queries, "Query dataset TSV")->required();
  ca->add_option("--library", candidates.library, "Compound TSV (compound_id, smiles)")->required();
  ca->add_option("--ppm", candidates.ppm, "Mass tolerance")->capture_default_str()->check(CLI::PositiveNumber);
  ca->add_option("--cap", candidates.cap, "Maximum candidates per query")->capture_default_str();
  ca->add_option("--adduct", candidates.default_adduct, "Adduct when a query has none")->capture_default_str();

  EmbedCommand embed;
  auto* e = app.add_subcommand("embed", "Metadata embedding vectors");
  e->add_option("--train", embed.train, "Dataset the statistics are fitted on")->required();
  e->add_option("--dataset", embed.dataset, "Dataset to embed (default: the training set)");
  e->add_option("--metadata-config", embed.metadata_config, "JSON vocabulary/config file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& ok) {
    return app.exit(ok);
  } catch (const CLI::ParseError& err) {
    app.exit(err);
    return 1;
  }

  try {
    Output out(g.out, std::cout, std::cerr);
    if (s->parsed()) cmd_split(g, split, out);
    if (d->parsed()) cmd_diagnose(g, diagnose, out);
    if (b->parsed()) cmd_bin(g, bin, out);
    if (sc->parsed()) cmd_score(g, score, out);
    if (r->parsed()) cmd_retrieve(g, retrieve, out);
    if (c->parsed()) cmd_compare(g, compare, out);
    if (bl->parsed()) cmd_baseline(g, baseline, out);
    if (im->parsed()) cmd_import(g, import_mgf, out);
    if (ims->parsed()) cmd_import(g, import_msp, out);
    if (ca->parsed()) cmd_candidates(g, candidates, out);
    if (e->parsed()) cmd_embed(g, embed, out);
  } catch (const UsageError& err) {
    std::cerr << "usage error: " << err.what() << '\n';
    return 1;
  } catch (const Error& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return 2;
  }
  return 0;
}
