#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "msbench/harness/dataset.hpp"
#include "msbench/spectra/formats.hpp"
#include "msbench/text.hpp"

namespace msbench::harness {

struct CollisionEnergy {
  std::optional<double> ace;
  std::optional<double> nce;
};

// "35", "35 eV" -> ACE; "35%", "NCE 35", "35 (nominal)"... -> NCE when marked
// normalised, otherwise unreadable values are left missing.
inline CollisionEnergy parse_collision_energy(std::string_view value, bool normalised_field) {
  std::string v = text::to_lower(text::trim(value));
  bool nce = normalised_field;
  auto strip = [&](std::string_view token) {
    for (auto pos = v.find(token); pos != std::string::npos; pos = v.find(token)) {
      v.erase(pos, token.size());
    }
  };
  if (v.find('%') != std::string::npos || v.find("nce") != std::string::npos) nce = true;
  strip("%");
  strip("nce");
  strip("ev");
  strip("=");
  CollisionEnergy out;
  const auto x = text::parse_double(text::trim(v));
  if (!x || *x < 0) return out;
  (nce ? out.nce : out.ace) = *x;
  return out;
}

inline std::optional<std::string> normalised_ion_mode(std::string_view v) {
  const std::string s = text::to_lower(text::trim(v));
  if (s == "positive" || s == "pos" || s == "p" || s == "+") return "positive";
  if (s == "negative" || s == "neg" || s == "n" || s == "-") return "negative";
  return std::nullopt;
}

inline std::optional<std::string> first_field(const spectra::Fields& f, std::initializer_list<const char*> keys) {
  for (const char* k : keys) {
    if (auto v = spectra::find_field(f, k); v && !metadata::is_missing_token(*v)) return v;
  }
  return std::nullopt;
}

struct ImportResult {
  std::vector<DatasetRecord> records;
  std::size_t skipped = 0;
  std::vector<spectra::ParseDiagnostic> diagnostics;
};

// Maps MGF/MSP header fields onto dataset columns. Duplicate record ids keep
// the first record.
inline ImportResult import_library(spectra::ParseResult parsed) {
  ImportResult out;
  out.skipped = parsed.skipped;
  out.diagnostics = std::move(parsed.diagnostics);
  std::set<std::string> seen;
  for (auto& rec : parsed.records) {
    const auto& f = rec.fields;
    DatasetRecord r;
    r.record_id = rec.spectrum.record_id();
    r.line = rec.line;
    if (!seen.insert(r.record_id).second) {
      ++out.skipped;
      out.diagnostics.push_back({rec.line, "duplicate record id '" + r.record_id + "' skipped"});
      continue;
    }
    r.smiles = first_field(f, {"SMILES", "computed_SMILES"}).value_or("");
    if (const auto nce = first_field(f, {"NCE", "NORMALIZED_COLLISION_ENERGY"})) {
      r.metadata.nce = parse_collision_energy(*nce, true).nce;
    }
    if (const auto ce = first_field(f, {"COLLISION_ENERGY", "COLLISIONENERGY", "ACE"})) {
      const auto parsed_ce = parse_collision_energy(*ce, false);
      if (parsed_ce.ace) r.metadata.ace = parsed_ce.ace;
      if (parsed_ce.nce && !r.metadata.nce) r.metadata.nce = parsed_ce.nce;
      if (!parsed_ce.ace && !parsed_ce.nce) {
        out.diagnostics.push_back({rec.line, "record '" + r.record_id + "': collision energy '" + *ce + "' not used"});
      }
    }
    r.metadata.instrument_type = first_field(f, {"INSTRUMENT_TYPE", "INSTRUMENTTYPE", "INSTRUMENT"});
    r.metadata.precursor_type = first_field(f, {"PRECURSOR_TYPE", "PRECURSORTYPE", "ADDUCT", "ION"});
    if (const auto mode = first_field(f, {"IONMODE", "ION_MODE", "POLARITY"})) {
      r.metadata.ion_mode = normalised_ion_mode(*mode);
    } else if (const auto charge = first_field(f, {"CHARGE"})) {
      const auto c = text::trim(*charge);
      if (!c.empty() && c.back() == '+') r.metadata.ion_mode = "positive";
      if (!c.empty() && c.back() == '-') r.metadata.ion_mode = "negative";
    }
    r.metadata.precursor_mz = rec.spectrum.precursor_mz();
    r.spectrum = std::move(rec.spectrum);
    out.records.push_back(std::move(r));
  }
  return out;
}

}  // namespace msbench::harness
