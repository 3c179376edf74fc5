#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/fingerprint/fingerprint.hpp"
#include "msbench/parallel.hpp"
#include "msbench/rng.hpp"
#include "msbench/spectra/entropy.hpp"
#include "msbench/splits/ks.hpp"
#include "msbench/splits/pairs.hpp"
#include "msbench/splits/split.hpp"

namespace msbench::splits {

struct Overlap {
  double test_in_train = 0;  // |A n B| / |B|
  double jaccard = 0;        // |A n B| / |A u B|
  std::vector<std::string> warnings;
};

// Scaffold-key set overlap of B against A. Empty denominators give 0 and a
// warning.
inline Overlap scaffold_overlap(const std::set<std::string>& a, const std::set<std::string>& b) {
  Overlap out;
  std::size_t shared = 0;
  for (const auto& s : b) shared += a.count(s);
  const std::size_t united = a.size() + b.size() - shared;
  if (b.empty()) {
    out.warnings.push_back("scaffold overlap: second set is empty");
  } else {
    out.test_in_train = static_cast<double>(shared) / static_cast<double>(b.size());
  }
  if (united == 0) {
    out.warnings.push_back("scaffold overlap: both sets are empty");
  } else {
    out.jaccard = static_cast<double>(shared) / static_cast<double>(united);
  }
  return out;
}

struct EntropyShift {
  double mean_entropy_train = 0;  // nats
  double mean_entropy_other = 0;
  KsResult ks;
};

namespace detail {
inline std::vector<double> entropies(const std::vector<spectra::Spectrum>& list, unsigned threads) {
  std::vector<double> out(list.size());
  parallel_for(list.size(), threads, [&](std::size_t i) { out[i] = spectra::spectral_entropy(list[i]); });
  return out;
}

// Order-independent mean: sum in sorted order.
inline double sorted_mean(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  double sum = 0;
  for (double x : v) sum += x;
  return sum / static_cast<double>(v.size());
}
}  // namespace detail

// Spectral entropies of both lists compared with the two-sample KS test.
inline EntropyShift entropy_shift(const std::vector<spectra::Spectrum>& train,
                                  const std::vector<spectra::Spectrum>& other, unsigned threads = 1) {
  if (train.empty() || other.empty()) throw UsageError("entropy shift needs two non-empty spectrum lists");
  const auto ht = detail::entropies(train, threads);
  const auto ho = detail::entropies(other, threads);
  EntropyShift out;
  out.mean_entropy_train = detail::sorted_mean(ht);
  out.mean_entropy_other = detail::sorted_mean(ho);
  out.ks = ks_two_sample(ht, ho);
  return out;
}

struct MoleculeFeatures {
  fp::FingerprintBits fingerprint;
  std::string scaffold;  // empty when acyclic
};

struct PairDiagnostics {
  std::string name;  // "train-val" or "train-test"
  std::size_t molecules_train = 0;
  std::size_t molecules_other = 0;
  std::size_t spectra_train = 0;
  std::size_t spectra_other = 0;
  double mean_tanimoto = 0;  // over Train-Other pairs
  KsResult tanimoto_ks;      // Train-Train vs Train-Other
  Overlap scaffold;
  EntropyShift entropy;
};

struct SplitDiagnostics {
  std::vector<PairDiagnostics> pairs;
  double mean_tanimoto_train_train = 0;
  std::size_t train_train_pairs = 0;
  std::vector<std::string> warnings;
};

struct DiagnoseOptions {
  std::size_t n_pairs = kDefaultPairs;
  std::uint64_t seed = 0;
  unsigned threads = 1;
};

// Train-val and train-test diagnostics. `molecules` maps molecule key to its
// features; `spectra` pairs each spectrum with its molecule key. Every
// molecule must be assigned by `split`.
inline SplitDiagnostics diagnose_split(const std::map<std::string, MoleculeFeatures>& molecules,
                                       const std::vector<std::pair<std::string, spectra::Spectrum>>& spectra_by_key,
                                       const SplitAssignment& split, const DiagnoseOptions& options = {}) {
  std::map<Partition, std::vector<const fp::FingerprintBits*>> fps;
  std::map<Partition, std::set<std::string>> scaffolds;
  for (const auto& [key, features] : molecules) {
    const auto it = split.partition_of.find(key);
    if (it == split.partition_of.end()) throw DataError("molecule '" + key + "' is missing from the split file");
    fps[it->second].push_back(&features.fingerprint);
    scaffolds[it->second].insert(features.scaffold);
  }
  std::map<Partition, std::vector<spectra::Spectrum>> spectra;
  for (const auto& [key, s] : spectra_by_key) {
    const auto it = split.partition_of.find(key);
    if (it == split.partition_of.end()) throw DataError("molecule '" + key + "' is missing from the split file");
    spectra[it->second].push_back(s);
  }
  auto copy = [&](Partition p) {
    std::vector<fp::FingerprintBits> out;
    for (const auto* f : fps[p]) out.push_back(*f);
    return out;
  };

  SplitDiagnostics out;
  const auto train = copy(Partition::Train);
  if (train.size() < 2) throw DataError("diagnostics need at least 2 training molecules");
  const auto tt = sample_tanimoto_pairs(train, {}, options.n_pairs, substream_seed(options.seed, 0), true,
                                        options.threads);
  out.mean_tanimoto_train_train = detail::sorted_mean(tt);
  out.train_train_pairs = tt.size();

  std::uint64_t stream = 1;
  for (Partition other : {Partition::Val, Partition::Test}) {
    const std::string name = std::string("train-") + to_string(other);
    const auto theirs = copy(other);
    if (theirs.empty()) {
      out.warnings.push_back(name + ": no " + to_string(other) + " molecules, pair skipped");
      ++stream;
      continue;
    }
    PairDiagnostics d;
    d.name = name;
    d.molecules_train = train.size();
    d.molecules_other = theirs.size();
    const auto to = sample_tanimoto_pairs(train, theirs, options.n_pairs, substream_seed(options.seed, stream++), false,
                                          options.threads);
    d.mean_tanimoto = detail::sorted_mean(to);
    d.tanimoto_ks = ks_two_sample(tt, to);
    d.scaffold = scaffold_overlap(scaffolds[Partition::Train], scaffolds[other]);
    d.spectra_train = spectra[Partition::Train].size();
    d.spectra_other = spectra[other].size();
    if (d.spectra_train > 0 && d.spectra_other > 0) {
      d.entropy = entropy_shift(spectra[Partition::Train], spectra[other], options.threads);
    } else {
      out.warnings.push_back(name + ": no spectra on one side, entropy shift skipped");
    }
    for (const auto& w : d.scaffold.warnings) out.warnings.push_back(name + ": " + w);
    out.pairs.push_back(std::move(d));
  }
  return out;
}

}  // namespace msbench::splits
