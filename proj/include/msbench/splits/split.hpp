#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/rng.hpp"
#include "msbench/text.hpp"

namespace msbench::splits {

enum class Partition { Train = 0, Val = 1, Test = 2 };
inline constexpr std::array<Partition, 3> kPartitions = {Partition::Train, Partition::Val, Partition::Test};

inline const char* to_string(Partition p) {
  switch (p) {
    case Partition::Train: return "train";
    case Partition::Val: return "val";
    case Partition::Test: return "test";
  }
  return "?";
}

inline Partition partition_from_string(std::string_view s) {
  s = text::trim(s);
  if (s == "train") return Partition::Train;
  if (s == "val" || s == "valid" || s == "validation") return Partition::Val;
  if (s == "test") return Partition::Test;
  throw DataError("unknown partition '" + std::string(s) + "'");
}

enum class Strategy { Random, Scaffold, External };

inline const char* to_string(Strategy s) {
  switch (s) {
    case Strategy::Random: return "random";
    case Strategy::Scaffold: return "scaffold";
    case Strategy::External: return "external";
  }
  return "?";
}

inline Strategy strategy_from_string(std::string_view s) {
  if (s == "random") return Strategy::Random;
  if (s == "scaffold") return Strategy::Scaffold;
  throw UsageError("unknown split strategy '" + std::string(s) + "' (expected random or scaffold)");
}

struct Ratios {
  double train = 0.8;
  double val = 0.1;
  double test = 0.1;

  double operator[](Partition p) const {
    return p == Partition::Train ? train : p == Partition::Val ? val : test;
  }

  void validate() const {
    for (double r : {train, val, test}) {
      if (!(r > 0) || !std::isfinite(r)) throw UsageError("split ratios must be positive");
    }
    if (std::abs(train + val + test - 1.0) > 1e-9) {
      throw UsageError("split ratios must sum to 1, got " + text::format_number(train + val + test));
    }
  }
};

struct SplitAssignment {
  std::map<std::string, Partition> partition_of;  // molecule key -> partition
  std::uint64_t seed = 0;
  Strategy strategy = Strategy::Random;
  Ratios ratios;
  std::vector<std::string> warnings;

  std::array<std::size_t, 3> sizes() const {
    std::array<std::size_t, 3> out{};
    for (const auto& [key, p] : partition_of) ++out[static_cast<int>(p)];
    return out;
  }

  std::vector<std::string> keys_in(Partition p) const {
    std::vector<std::string> out;
    for (const auto& [key, q] : partition_of) {
      if (q == p) out.push_back(key);
    }
    return out;
  }
};

namespace detail {

inline std::vector<std::string> sorted_unique_keys(std::vector<std::string> keys) {
  std::sort(keys.begin(), keys.end());
  if (const auto dup = std::adjacent_find(keys.begin(), keys.end()); dup != keys.end()) {
    throw UsageError("duplicate molecule key '" + *dup + "'");
  }
  return keys;
}

// Cut positions round(cumulative ratio * n) for the first two partitions.
inline std::pair<std::size_t, std::size_t> cut_points(std::size_t n, const Ratios& r) {
  const double total = static_cast<double>(n);
  const auto first = static_cast<std::size_t>(std::llround(r.train * total));
  const auto second = static_cast<std::size_t>(std::llround((r.train + r.val) * total));
  return {std::min(first, n), std::min(std::max(first, second), n)};
}

}  // namespace detail

// Seeded shuffle of the sorted keys, cut at the cumulative ratio boundaries.
inline SplitAssignment random_split(std::vector<std::string> keys, const Ratios& ratios, std::uint64_t seed) {
  ratios.validate();
  if (keys.size() < kPartitions.size()) {
    throw UsageError("random split needs at least 3 molecules, got " + std::to_string(keys.size()));
  }
  keys = detail::sorted_unique_keys(std::move(keys));
  Rng rng(seed);
  rng.shuffle(std::span<std::string>(keys));
  const auto [first, second] = detail::cut_points(keys.size(), ratios);
  SplitAssignment out;
  out.seed = seed;
  out.strategy = Strategy::Random;
  out.ratios = ratios;
  for (std::size_t i = 0; i < keys.size(); ++i) {
    out.partition_of[keys[i]] = i < first ? Partition::Train : i < second ? Partition::Val : Partition::Test;
  }
  return out;
}

struct ScaffoldedMolecule {
  std::string key;       // molecule identity
  std::string scaffold;  // scaffold key; empty for acyclic molecules
};

// Scaffold groups (acyclic molecules share the empty group) ordered by size
// descending, ties by scaffold text, then assigned whole: to train while it
// stays within its target, else to val while train+val stays within its
// cumulative target, else to test. A first group larger than the train
// target goes to train with a warning. The order is deterministic; the seed is
// only recorded.
inline SplitAssignment scaffold_split(const std::vector<ScaffoldedMolecule>& molecules, const Ratios& ratios,
                                      std::uint64_t seed) {
  ratios.validate();
  if (molecules.size() < kPartitions.size()) {
    throw UsageError("scaffold split needs at least 3 molecules, got " + std::to_string(molecules.size()));
  }
  std::map<std::string, std::vector<std::string>> groups;
  std::set<std::string> seen;
  for (const auto& m : molecules) {
    if (!seen.insert(m.key).second) throw UsageError("duplicate molecule key '" + m.key + "'");
    groups[m.scaffold].push_back(m.key);
  }
  std::vector<std::pair<std::string, std::vector<std::string>>> ordered(groups.begin(), groups.end());
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const auto& a, const auto& b) { return a.second.size() > b.second.size(); });

  const double n = static_cast<double>(molecules.size());
  const double train_target = ratios.train * n;
  const double val_target = (ratios.train + ratios.val) * n;
  constexpr double kEps = 1e-9;

  SplitAssignment out;
  out.seed = seed;
  out.strategy = Strategy::Scaffold;
  out.ratios = ratios;
  std::size_t train = 0, val = 0;
  for (const auto& [scaffold, keys] : ordered) {
    const double size = static_cast<double>(keys.size());
    Partition p;
    if (train == 0 && size > train_target + kEps) {
      p = Partition::Train;
      out.warnings.push_back("scaffold group '" + scaffold + "' (" + std::to_string(keys.size()) +
                             " molecules) exceeds the train target of " + text::format_number(train_target) +
                             "; assigned to train");
    } else if (static_cast<double>(train) + size <= train_target + kEps) {
      p = Partition::Train;
    } else if (static_cast<double>(train + val) + size <= val_target + kEps) {
      p = Partition::Val;
    } else {
      p = Partition::Test;
    }
    if (p == Partition::Train) train += keys.size();
    if (p == Partition::Val) val += keys.size();
    for (const auto& k : keys) out.partition_of[k] = p;
  }
  return out;
}

// Two-column TSV (molecule_key, partition) with a header row.
inline void write_split_tsv(std::ostream& out, const SplitAssignment& split) {
  out << "# strategy=" << to_string(split.strategy) << " seed=" << split.seed << " ratios="
      << text::format_number(split.ratios.train) << ',' << text::format_number(split.ratios.val) << ','
      << text::format_number(split.ratios.test) << '\n';
  out << "molecule_key\tpartition\n";
  for (const auto& [key, p] : split.partition_of) out << key << '\t' << to_string(p) << '\n';
}

// Reads a split TSV. A header row is optional; '#' lines are comments.
inline SplitAssignment read_split_tsv(std::istream& in) {
  SplitAssignment out;
  out.strategy = Strategy::External;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cells = text::split(line, '\t');
    if (cells.size() != 2) {
      throw ParseError("split file line " + std::to_string(line_no) + ": expected 2 tab-separated cells", line_no, 0);
    }
    const std::string key(text::trim(cells[0]));
    if (first && key == "molecule_key") {
      first = false;
      continue;
    }
    first = false;
    Partition p;
    try {
      p = partition_from_string(cells[1]);
    } catch (const DataError& e) {
      throw ParseError("split file line " + std::to_string(line_no) + ": " + e.what(), line_no, cells[0].size() + 1);
    }
    if (!out.partition_of.emplace(key, p).second) {
      throw ParseError("split file line " + std::to_string(line_no) + ": duplicate key '" + key + "'", line_no, 0);
    }
  }
  return out;
}

}  // namespace msbench::splits
