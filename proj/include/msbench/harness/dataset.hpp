#pragma once

#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/fingerprint/morgan.hpp"
#include "msbench/fingerprint/scaffold.hpp"
#include "msbench/metadata/metadata.hpp"
#include "msbench/mol/canonical.hpp"
#include "msbench/mol/smiles_parser.hpp"
#include "msbench/spectra/formats.hpp"
#include "msbench/splits/diagnostics.hpp"

namespace msbench::harness {

struct DatasetRecord {
  std::string record_id;
  std::string smiles;
  std::string molecule_key;  // canonical form; empty when SMILES were not parsed
  metadata::MetadataRecord metadata;
  spectra::Spectrum spectrum;
  spectra::Fields fields;  // all cells by column name
  std::size_t line = 0;
};

struct QuarantinedRecord {
  std::string record_id;
  std::size_t line = 0;
  std::string reason;
};

struct Dataset {
  std::vector<DatasetRecord> records;
  std::vector<QuarantinedRecord> quarantined;
  std::size_t skipped = 0;
  std::vector<spectra::ParseDiagnostic> diagnostics;

  std::size_t total() const { return records.size() + quarantined.size() + skipped; }
};

struct LoadOptions {
  bool require_smiles = true;  // parse SMILES and quarantine failures
  spectra::ColumnMap columns;
};

inline metadata::MetadataRecord metadata_from_fields(const spectra::Fields& f, std::optional<double> precursor) {
  metadata::MetadataRecord m;
  auto cell = [&](const char* key) { return spectra::find_field(f, key).value_or(""); };
  m.ace = metadata::parse_numeric_field("ace", cell("ace"));
  m.nce = metadata::parse_numeric_field("nce", cell("nce"));
  m.instrument_type = metadata::parse_category_field(cell("instrument_type"));
  m.precursor_type = metadata::parse_category_field(cell("precursor_type"));
  m.ion_mode = metadata::parse_category_field(cell("ion_mode"));
  m.precursor_mz = precursor;
  metadata::validate(m);
  return m;
}

// Canonical molecule key of a SMILES string; throws SmilesError.
inline std::string molecule_key(std::string_view smiles) { return mol::canonical_form(mol::parse_smiles(smiles)); }

// Reads a dataset TSV. Rows the TSV reader rejects count as skipped; rows
// with unparseable SMILES or metadata are quarantined with a reason.
inline Dataset load_dataset(std::istream& in, const LoadOptions& options = {}) {
  auto parsed = spectra::parse_tsv(in, options.columns);
  Dataset d;
  d.skipped = parsed.skipped;
  d.diagnostics = std::move(parsed.diagnostics);
  for (auto& rec : parsed.records) {
    DatasetRecord r;
    r.record_id = rec.spectrum.record_id();
    r.line = rec.line;
    r.smiles = spectra::find_field(rec.fields, "smiles").value_or("");
    try {
      r.metadata = metadata_from_fields(rec.fields, rec.spectrum.precursor_mz());
      if (options.require_smiles) {
        if (r.smiles.empty() || metadata::is_missing_token(r.smiles)) throw DataError("missing SMILES");
        r.molecule_key = molecule_key(r.smiles);
      }
    } catch (const Error& e) {
      d.quarantined.push_back({r.record_id, r.line, e.what()});
      continue;
    }
    r.spectrum = std::move(rec.spectrum);
    r.fields = std::move(rec.fields);
    d.records.push_back(std::move(r));
  }
  return d;
}

inline void write_quarantine_tsv(std::ostream& out, const Dataset& d) {
  out << "record_id\tline\treason\n";
  for (const auto& q : d.quarantined) out << q.record_id << '\t' << q.line << '\t' << q.reason << '\n';
  for (const auto& s : d.diagnostics) out << "\t" << s.line << "\tskipped: " << s.message << '\n';
}

// Writes records in the dataset TSV layout; absent values are left empty.
inline void write_dataset_tsv(std::ostream& out, const std::vector<DatasetRecord>& records) {
  const auto& cols = spectra::dataset_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) out << (i ? "\t" : "") << cols[i];
  out << '\n';
  auto num = [](const std::optional<double>& v) { return v ? text::format_number(*v) : std::string(); };
  for (const auto& r : records) {
    const auto& m = r.metadata;
    out << r.record_id << '\t' << r.smiles << '\t' << num(m.ace) << '\t' << num(m.nce) << '\t'
        << m.instrument_type.value_or("") << '\t' << m.precursor_type.value_or("") << '\t' << m.ion_mode.value_or("")
        << '\t' << num(r.spectrum.precursor_mz()) << '\t' << spectra::format_peak_list(r.spectrum) << '\n';
  }
}

struct FingerprintOptions {
  int radius = fp::FingerprintBits::kDefaultRadius;
  std::size_t bits = fp::FingerprintBits::kDefaultBits;
};

// Fingerprint and scaffold per distinct molecule key.
inline std::map<std::string, splits::MoleculeFeatures> molecule_features(const Dataset& d,
                                                                         const FingerprintOptions& o = {}) {
  std::map<std::string, splits::MoleculeFeatures> out;
  for (const auto& r : d.records) {
    if (r.molecule_key.empty() || out.count(r.molecule_key)) continue;
    const auto mol = mol::parse_smiles(r.smiles);
    out.emplace(r.molecule_key,
                splits::MoleculeFeatures{fp::morgan_fingerprint(mol, o.radius, o.bits), fp::murcko_scaffold(mol).key});
  }
  return out;
}

}  // namespace msbench::harness
