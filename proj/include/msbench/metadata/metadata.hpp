#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "msbench/error.hpp"
#include "msbench/text.hpp"

namespace msbench::metadata {

struct MetadataRecord {
  std::optional<double> ace;  // eV
  std::optional<double> nce;  // %
  std::optional<std::string> instrument_type;
  std::optional<std::string> precursor_type;
  std::optional<std::string> ion_mode;
  std::optional<double> precursor_mz;  // Da

  friend bool operator==(const MetadataRecord&, const MetadataRecord&) = default;
};

inline bool is_missing_token(std::string_view v) {
  v = text::trim(v);
  return v.empty() || v == "NA" || v == "NaN" || v == "nan" || v == "None" || v == "null";
}

// Reads one metadata cell. Missing tokens give nullopt; anything else must be
// a finite number.
inline std::optional<double> parse_numeric_field(std::string_view name, std::string_view value) {
  if (is_missing_token(value)) return std::nullopt;
  const auto v = text::parse_double(value);
  if (!v) throw DataError(std::string(name) + " '" + std::string(text::trim(value)) + "' is not a number");
  return v;
}

inline std::optional<std::string> parse_category_field(std::string_view value) {
  if (is_missing_token(value)) return std::nullopt;
  return std::string(text::trim(value));
}

// Rejects negative collision energies and non-positive precursor m/z.
inline void validate(const MetadataRecord& rec) {
  if (rec.ace && *rec.ace < 0) throw DataError("negative ACE " + text::format_number(*rec.ace));
  if (rec.nce && *rec.nce < 0) throw DataError("negative NCE " + text::format_number(*rec.nce));
  if (rec.precursor_mz && *rec.precursor_mz <= 0) {
    throw DataError("precursor m/z must be positive, got " + text::format_number(*rec.precursor_mz));
  }
}

struct CategoryConfig {
  std::vector<std::string> vocabulary;  // sorted, unique
  std::size_t expected_count = 0;
};

struct MetadataConfig {
  CategoryConfig instrument_type;
  CategoryConfig precursor_type;
  CategoryConfig ion_mode;
  std::size_t max_precursor_bin = 1500;
};

struct ContinuousStats {
  bool missing = true;    // no training value at all
  bool constant = false;  // population std is 0
  double mean = 0;
  double std = 0;
  std::size_t count = 0;
};

struct CategoryStats {
  std::vector<std::string> vocabulary;
  std::size_t expected_count = 0;
  std::size_t observed_count = 0;  // unique non-missing values in the current dataset

  bool zeroed() const { return observed_count != expected_count; }
  std::optional<std::size_t> index_of(const std::string& value) const {
    const auto it = std::lower_bound(vocabulary.begin(), vocabulary.end(), value);
    if (it == vocabulary.end() || *it != value) return std::nullopt;
    return static_cast<std::size_t>(it - vocabulary.begin());
  }
};

struct MetadataStats {
  ContinuousStats ace;
  ContinuousStats nce;
  CategoryStats instrument_type;
  CategoryStats precursor_type;
  CategoryStats ion_mode;
  std::size_t max_precursor_bin = 1500;
  std::size_t unseen_category_records = 0;  // training records with an out-of-vocabulary category
};

struct Segment {
  std::string name;
  std::size_t offset = 0;
  std::size_t length = 0;
};

struct MetadataVector {
  std::vector<double> values;
  std::vector<Segment> layout;

  const Segment& segment(std::string_view name) const {
    for (const auto& s : layout) {
      if (s.name == name) return s;
    }
    throw UsageError("no metadata segment '" + std::string(name) + "'");
  }
  std::vector<double> slice(std::string_view name) const {
    const Segment& s = segment(name);
    return {values.begin() + static_cast<std::ptrdiff_t>(s.offset),
            values.begin() + static_cast<std::ptrdiff_t>(s.offset + s.length)};
  }
};

namespace detail {

inline CategoryConfig normalized(CategoryConfig c, const char* name) {
  for (auto& v : c.vocabulary) v = std::string(text::trim(v));
  std::sort(c.vocabulary.begin(), c.vocabulary.end());
  if (std::adjacent_find(c.vocabulary.begin(), c.vocabulary.end()) != c.vocabulary.end()) {
    throw DataError(std::string("duplicate entry in ") + name + " vocabulary");
  }
  return c;
}

inline ContinuousStats fit_continuous(const std::vector<double>& xs) {
  ContinuousStats s;
  s.count = xs.size();
  if (xs.empty()) return s;
  s.missing = false;
  double sum = 0;
  for (double x : xs) sum += x;
  s.mean = sum / static_cast<double>(xs.size());
  double ss = 0;
  for (double x : xs) ss += (x - s.mean) * (x - s.mean);
  s.std = std::sqrt(ss / static_cast<double>(xs.size()));
  s.constant = !(s.std > 0);
  return s;
}

inline std::size_t count_unique(const std::vector<MetadataRecord>& records,
                                std::optional<std::string> MetadataRecord::*field) {
  std::set<std::string> seen;
  for (const auto& r : records) {
    if (r.*field) seen.insert(*(r.*field));
  }
  return seen.size();
}

}  // namespace detail

// Continuous statistics over the training split; vocabularies from config.
// The observed category counts are taken from the same records and can be
// recounted for another dataset with observe_categories().
inline MetadataStats fit_metadata_stats(const std::vector<MetadataRecord>& train, const MetadataConfig& config) {
  if (train.empty()) throw UsageError("metadata statistics need at least one training record");
  if (config.max_precursor_bin == 0) throw UsageError("max_precursor_bin must be positive");
  MetadataStats stats;
  std::vector<double> ace, nce;
  for (const auto& r : train) {
    if (r.ace) ace.push_back(*r.ace);
    if (r.nce) nce.push_back(*r.nce);
  }
  stats.ace = detail::fit_continuous(ace);
  stats.nce = detail::fit_continuous(nce);

  auto category = [&](const CategoryConfig& raw, const char* name, std::optional<std::string> MetadataRecord::*field) {
    const CategoryConfig c = detail::normalized(raw, name);
    CategoryStats s;
    s.vocabulary = c.vocabulary;
    s.expected_count = c.expected_count;
    s.observed_count = detail::count_unique(train, field);
    return s;
  };
  stats.instrument_type = category(config.instrument_type, "instrument_type", &MetadataRecord::instrument_type);
  stats.precursor_type = category(config.precursor_type, "precursor_type", &MetadataRecord::precursor_type);
  stats.ion_mode = category(config.ion_mode, "ion_mode", &MetadataRecord::ion_mode);
  stats.max_precursor_bin = config.max_precursor_bin;

  for (const auto& r : train) {
    const bool unseen = (r.instrument_type && !stats.instrument_type.index_of(*r.instrument_type)) ||
                        (r.precursor_type && !stats.precursor_type.index_of(*r.precursor_type)) ||
                        (r.ion_mode && !stats.ion_mode.index_of(*r.ion_mode));
    stats.unseen_category_records += unseen ? 1 : 0;
  }
  return stats;
}

// Same statistics with observed category counts taken from `records`.
inline MetadataStats observe_categories(MetadataStats stats, const std::vector<MetadataRecord>& records) {
  stats.instrument_type.observed_count = detail::count_unique(records, &MetadataRecord::instrument_type);
  stats.precursor_type.observed_count = detail::count_unique(records, &MetadataRecord::precursor_type);
  stats.ion_mode.observed_count = detail::count_unique(records, &MetadataRecord::ion_mode);
  return stats;
}

inline std::vector<Segment> metadata_layout(const MetadataStats& stats) {
  std::vector<Segment> layout;
  std::size_t offset = 0;
  auto add = [&](const char* name, std::size_t length) {
    layout.push_back({name, offset, length});
    offset += length;
  };
  add("ace_indicator", 1);
  add("ace_value", 1);
  add("nce_indicator", 1);
  add("nce_value", 1);
  add("instrument_type", stats.instrument_type.vocabulary.size());
  add("precursor_type", stats.precursor_type.vocabulary.size());
  add("ion_mode", stats.ion_mode.vocabulary.size());
  add("precursor_mz", stats.max_precursor_bin);
  return layout;
}

// Fixed-length embedding. Continuous features are (indicator, value) with
// indicator 1 and value -1 when missing; categorical features are one-hot and
// all-zero when missing, unseen, or when the category count of the current
// dataset differs from the configured count; precursor m/z is one-hot over
// integer-Da bins capped at max_precursor_bin - 1.
inline MetadataVector embed_metadata(const MetadataRecord& rec, const MetadataStats& stats) {
  MetadataVector out;
  out.layout = metadata_layout(stats);
  const Segment& last = out.layout.back();
  out.values.assign(last.offset + last.length, 0.0);
  std::size_t pos = 0;

  auto continuous = [&](const std::optional<double>& x, const ContinuousStats& s) {
    if (!x || s.missing) {
      out.values[pos] = 1.0;
      out.values[pos + 1] = -1.0;
    } else {
      out.values[pos + 1] = s.constant ? 0.0 : (*x - s.mean) / s.std;
    }
    pos += 2;
  };
  continuous(rec.ace, stats.ace);
  continuous(rec.nce, stats.nce);

  auto category = [&](const std::optional<std::string>& value, const CategoryStats& s) {
    if (value && !s.zeroed()) {
      if (const auto index = s.index_of(*value)) out.values[pos + *index] = 1.0;
    }
    pos += s.vocabulary.size();
  };
  category(rec.instrument_type, stats.instrument_type);
  category(rec.precursor_type, stats.precursor_type);
  category(rec.ion_mode, stats.ion_mode);

  if (rec.precursor_mz && *rec.precursor_mz >= 0) {
    const auto bin = static_cast<std::size_t>(std::floor(*rec.precursor_mz));
    out.values[pos + std::min(bin, stats.max_precursor_bin - 1)] = 1.0;
  }
  return out;
}

// Embeds every record of one dataset, with category counts observed on it.
inline std::vector<MetadataVector> embed_dataset(const std::vector<MetadataRecord>& records,
                                                 const MetadataStats& stats) {
  const MetadataStats current = observe_categories(stats, records);
  std::vector<MetadataVector> out;
  out.reserve(records.size());
  for (const auto& r : records) out.push_back(embed_metadata(r, current));
  return out;
}

// JSON config:
//   {"instrument_type": {"vocabulary": [...], "expected_count": n}, ...,
//    "max_precursor_bin": 1500}
// expected_count defaults to the vocabulary size.
inline MetadataConfig config_from_json(const nlohmann::json& j) {
  if (!j.is_object()) throw DataError("metadata config must be a JSON object");
  MetadataConfig c;
  auto category = [&](const char* key, CategoryConfig& out) {
    if (!j.contains(key)) return;
    const auto& node = j.at(key);
    try {
      out.vocabulary = node.at("vocabulary").get<std::vector<std::string>>();
      out.expected_count = node.value("expected_count", out.vocabulary.size());
    } catch (const nlohmann::json::exception& e) {
      throw DataError(std::string("metadata config '") + key + "': " + e.what());
    }
    out = detail::normalized(out, key);
  };
  category("instrument_type", c.instrument_type);
  category("precursor_type", c.precursor_type);
  category("ion_mode", c.ion_mode);
  if (j.contains("max_precursor_bin")) {
    const auto& v = j.at("max_precursor_bin");
    if (!v.is_number_integer() || v.get<long long>() <= 0) throw DataError("max_precursor_bin must be a positive integer");
    c.max_precursor_bin = v.get<std::size_t>();
  }
  return c;
}

inline nlohmann::ordered_json to_json(const MetadataStats& s) {
  auto continuous = [](const ContinuousStats& c) {
    nlohmann::ordered_json j;
    j["missing"] = c.missing;
    j["constant"] = c.constant;
    j["mean"] = c.mean;
    j["std"] = c.std;
    j["count"] = c.count;
    return j;
  };
  auto category = [](const CategoryStats& c) {
    nlohmann::ordered_json j;
    j["vocabulary"] = c.vocabulary;
    j["expected_count"] = c.expected_count;
    j["observed_count"] = c.observed_count;
    return j;
  };
  nlohmann::ordered_json j;
  j["ace"] = continuous(s.ace);
  j["nce"] = continuous(s.nce);
  j["instrument_type"] = category(s.instrument_type);
  j["precursor_type"] = category(s.precursor_type);
  j["ion_mode"] = category(s.ion_mode);
  j["max_precursor_bin"] = s.max_precursor_bin;
  j["unseen_category_records"] = s.unseen_category_records;
  return j;
}

inline MetadataStats stats_from_json(const nlohmann::json& j) {
  try {
    auto continuous = [](const nlohmann::json& n) {
      ContinuousStats c;
      c.missing = n.at("missing").get<bool>();
      c.constant = n.at("constant").get<bool>();
      c.mean = n.at("mean").get<double>();
      c.std = n.at("std").get<double>();
      c.count = n.at("count").get<std::size_t>();
      return c;
    };
    auto category = [](const nlohmann::json& n) {
      CategoryStats c;
      c.vocabulary = n.at("vocabulary").get<std::vector<std::string>>();
      c.expected_count = n.at("expected_count").get<std::size_t>();
      c.observed_count = n.at("observed_count").get<std::size_t>();
      return c;
    };
    MetadataStats s;
    s.ace = continuous(j.at("ace"));
    s.nce = continuous(j.at("nce"));
    s.instrument_type = category(j.at("instrument_type"));
    s.precursor_type = category(j.at("precursor_type"));
    s.ion_mode = category(j.at("ion_mode"));
    s.max_precursor_bin = j.at("max_precursor_bin").get<std::size_t>();
    s.unseen_category_records = j.value("unseen_category_records", std::size_t{0});
    if (s.max_precursor_bin == 0) throw DataError("max_precursor_bin must be positive");
    return s;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed metadata stats: ") + e.what());
  }
}

}  // namespace msbench::metadata
