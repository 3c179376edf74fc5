#pragma once

#include <istream>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/spectra/spectrum.hpp"
#include "msbench/text.hpp"

namespace msbench::spectra {

// Header fields of one record, in file order, values verbatim.
using Fields = std::vector<std::pair<std::string, std::string>>;

inline std::optional<std::string> find_field(const Fields& fields, std::string_view key) {
  for (const auto& [k, v] : fields) {
    if (text::iequals(k, key)) return v;
  }
  return std::nullopt;
}

struct SpectrumRecord {
  Spectrum spectrum;
  Fields fields;
  std::size_t line = 0;  // first line of the record
};

struct ParseDiagnostic {
  std::size_t line = 0;
  std::string message;
};

struct ParseResult {
  std::vector<SpectrumRecord> records;
  std::size_t skipped = 0;
  std::vector<ParseDiagnostic> diagnostics;
};

namespace detail {

inline bool read_line(std::istream& in, std::string& line, std::size_t& line_no) {
  if (!std::getline(in, line)) return false;
  ++line_no;
  if (!line.empty() && line.back() == '\r') line.pop_back();
  return true;
}

inline std::optional<Peak> parse_peak_tokens(std::string_view a, std::string_view b) {
  const auto mz = text::parse_double(a);
  const auto intensity = text::parse_double(b);
  if (!mz || !intensity) return std::nullopt;
  return Peak{*mz, *intensity};
}

}  // namespace detail

// Mascot generic format. Each BEGIN IONS ... END IONS block is one record:
// TITLE is the record id, the first PEPMASS token the precursor m/z, other
// KEY=VALUE lines are kept verbatim. Records with unreadable peaks are skipped
// and reported; a block without END IONS is a ParseError.
inline ParseResult parse_mgf(std::istream& in) {
  ParseResult result;
  Fields globals;
  std::string line;
  std::size_t line_no = 0;
  std::size_t record_index = 0;

  while (detail::read_line(in, line, line_no)) {
    const std::string_view t = text::trim(line);
    if (t.empty() || t.front() == '#' || t.front() == ';' || t.front() == '!') continue;
    if (!text::iequals(t, "BEGIN IONS")) {
      const auto eq = t.find('=');
      if (eq != std::string_view::npos) {
        globals.emplace_back(std::string(text::trim(t.substr(0, eq))), std::string(text::trim(t.substr(eq + 1))));
      } else {
        result.diagnostics.push_back({line_no, "ignored text outside BEGIN IONS block"});
      }
      continue;
    }

    const std::size_t start = line_no;
    ++record_index;
    Fields fields;
    std::vector<Peak> peaks;
    std::optional<std::string> error;
    bool closed = false;
    while (detail::read_line(in, line, line_no)) {
      const std::string_view body = text::trim(line);
      if (body.empty() || body.front() == '#') continue;
      if (text::iequals(body, "END IONS")) {
        closed = true;
        break;
      }
      if (text::iequals(body, "BEGIN IONS")) {
        throw ParseError("MGF block starting at line " + std::to_string(start) + " has no END IONS (line " +
                             std::to_string(line_no) + " opens another block)",
                         start, 0);
      }
      const bool numeric_start =
          std::isdigit(static_cast<unsigned char>(body.front())) || body.front() == '.' || body.front() == '-';
      const auto eq = body.find('=');
      if (!numeric_start && eq != std::string_view::npos) {
        fields.emplace_back(std::string(text::trim(body.substr(0, eq))), std::string(text::trim(body.substr(eq + 1))));
        continue;
      }
      if (error) continue;
      const auto tokens = text::split_whitespace(body);
      std::optional<Peak> peak;
      if (tokens.size() == 2 || tokens.size() == 3) peak = detail::parse_peak_tokens(tokens[0], tokens[1]);
      if (!peak) {
        error = "line " + std::to_string(line_no) + ": malformed peak line '" + std::string(body) + "'";
        continue;
      }
      peaks.push_back(*peak);
    }
    if (!closed) {
      throw ParseError("MGF block starting at line " + std::to_string(start) + " has no END IONS", start, 0);
    }

    Fields merged = globals;
    for (auto& f : fields) {
      bool replaced = false;
      for (auto& g : merged) {
        if (text::iequals(g.first, f.first)) {
          g.second = f.second;
          replaced = true;
        }
      }
      if (!replaced) merged.push_back(f);
    }
    std::optional<double> precursor;
    if (!error) {
      if (const auto pepmass = find_field(merged, "PEPMASS")) {
        const auto tokens = text::split_whitespace(*pepmass);
        if (!tokens.empty()) precursor = text::parse_double(tokens[0]);
        if (!precursor) error = "PEPMASS '" + *pepmass + "' is not a number";
      }
    }
    std::string id = find_field(merged, "TITLE").value_or("");
    if (id.empty()) id = "record" + std::to_string(record_index);
    if (!error) {
      try {
        result.records.push_back({Spectrum(std::move(peaks), precursor, id), std::move(merged), start});
        continue;
      } catch (const DataError& e) {
        error = e.what();
      }
    }
    ++result.skipped;
    result.diagnostics.push_back({start, "skipped MGF record '" + id + "': " + *error});
  }
  return result;
}

// NIST MSP. Records start at "Name:", carry "Key: Value" headers and end
// after the number of peaks announced by "Num Peaks:". Peak pairs may share
// a line and be separated by whitespace, ',' or ';'; quoted annotations are
// ignored. PrecursorMZ (any case) becomes the precursor m/z.
inline ParseResult parse_msp(std::istream& in) {
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;

  struct Pending {
    std::size_t start = 0;
    Fields fields;
    std::vector<Peak> peaks;
    std::optional<long long> expected;
    std::optional<std::string> error;
  };
  std::optional<Pending> cur;
  std::size_t record_index = 0;

  auto finish = [&]() {
    if (!cur) return;
    Pending rec = std::move(*cur);
    cur.reset();
    ++record_index;
    std::string id = find_field(rec.fields, "Name").value_or("");
    if (id.empty()) id = "record" + std::to_string(record_index);
    if (!rec.error && !rec.expected) rec.error = "missing 'Num Peaks'";
    if (!rec.error && static_cast<long long>(rec.peaks.size()) != *rec.expected) {
      rec.error = "expected " + std::to_string(*rec.expected) + " peaks, found " + std::to_string(rec.peaks.size());
    }
    std::optional<double> precursor;
    if (!rec.error) {
      for (const char* key : {"PrecursorMZ", "Precursor_MZ", "PEPMASS"}) {
        if (const auto v = find_field(rec.fields, key)) {
          const auto tokens = text::split_whitespace(*v);
          if (!tokens.empty()) precursor = text::parse_double(tokens[0]);
          if (!precursor) rec.error = std::string(key) + " '" + *v + "' is not a number";
          break;
        }
      }
    }
    if (!rec.error) {
      try {
        result.records.push_back({Spectrum(std::move(rec.peaks), precursor, id), std::move(rec.fields), rec.start});
        return;
      } catch (const DataError& e) {
        rec.error = e.what();
      }
    }
    ++result.skipped;
    result.diagnostics.push_back({rec.start, "skipped MSP record '" + id + "': " + *rec.error});
  };

  while (detail::read_line(in, line, line_no)) {
    const std::string_view t = text::trim(line);
    if (t.empty()) {
      if (cur && (!cur->expected || static_cast<long long>(cur->peaks.size()) >= *cur->expected || cur->error)) {
        finish();
      } else if (cur && cur->expected) {
        cur->error = "blank line before all peaks were read";
        finish();
      }
      continue;
    }
    if (t.front() == '#') continue;

    const bool in_peaks = cur && cur->expected && static_cast<long long>(cur->peaks.size()) < *cur->expected;
    if (!in_peaks) {
      const auto colon = t.find(':');
      if (colon == std::string_view::npos) {
        if (cur) {
          if (!cur->error) cur->error = "line " + std::to_string(line_no) + ": unexpected text '" + std::string(t) + "'";
        } else {
          result.diagnostics.push_back({line_no, "ignored text outside a record"});
        }
        continue;
      }
      const std::string key(text::trim(t.substr(0, colon)));
      const std::string value(text::trim(t.substr(colon + 1)));
      if (text::iequals(key, "Name") && cur) finish();
      if (!cur) cur = Pending{line_no, {}, {}, std::nullopt, std::nullopt};
      if (text::iequals(key, "Num Peaks") || text::iequals(key, "Num_Peaks") || text::iequals(key, "NumPeaks")) {
        const auto n = text::parse_int(value);
        if (!n || *n < 0) {
          cur->error = "line " + std::to_string(line_no) + ": bad peak count '" + value + "'";
          cur->expected = 0;
        } else {
          cur->expected = *n;
        }
        continue;
      }
      cur->fields.emplace_back(key, value);
      continue;
    }

    // Peak data: drop quoted annotations, then read number pairs.
    std::string cleaned;
    bool quoted = false;
    for (char c : t) {
      if (c == '"') {
        quoted = !quoted;
        cleaned += ' ';
      } else if (!quoted) {
        cleaned += (c == ';' || c == ',') ? ' ' : c;
      }
    }
    const auto tokens = text::split_whitespace(cleaned);
    if (tokens.empty() || tokens.size() % 2 != 0) {
      if (!cur->error) cur->error = "line " + std::to_string(line_no) + ": malformed peak line '" + std::string(t) + "'";
      cur->expected = static_cast<long long>(cur->peaks.size());
      continue;
    }
    for (std::size_t i = 0; i + 1 < tokens.size(); i += 2) {
      const auto peak = detail::parse_peak_tokens(tokens[i], tokens[i + 1]);
      if (!peak) {
        if (!cur->error) cur->error = "line " + std::to_string(line_no) + ": malformed peak line '" + std::string(t) + "'";
        cur->expected = static_cast<long long>(cur->peaks.size());
        break;
      }
      cur->peaks.push_back(*peak);
    }
  }
  finish();
  return result;
}

// "mz:intensity" pairs separated by spaces. Throws ParseError with the
// 0-based column of the offending pair.
inline std::vector<Peak> parse_peak_list(std::string_view s) {
  std::vector<Peak> peaks;
  std::size_t i = 0;
  while (i < s.size()) {
    while (i < s.size() && text::is_space(s[i])) ++i;
    const std::size_t start = i;
    while (i < s.size() && !text::is_space(s[i])) ++i;
    if (i == start) break;
    const std::string_view pair = s.substr(start, i - start);
    const auto colon = pair.find(':');
    std::optional<Peak> peak;
    if (colon != std::string_view::npos) peak = detail::parse_peak_tokens(pair.substr(0, colon), pair.substr(colon + 1));
    if (!peak) throw ParseError("malformed peak '" + std::string(pair) + "', expected mz:intensity", 0, start);
    peaks.push_back(*peak);
  }
  return peaks;
}

inline std::string format_peak_list(const Spectrum& s) {
  std::string out;
  for (const Peak& p : s.peaks()) {
    if (!out.empty()) out += ' ';
    out += text::format_number(p.mz);
    out += ':';
    out += text::format_number(p.intensity);
  }
  return out;
}

// Dataset TSV columns, by logical name.
inline const std::vector<std::string>& dataset_columns() {
  static const std::vector<std::string> columns = {
      "record_id", "smiles", "ace", "nce", "instrument_type", "precursor_type", "ion_mode", "precursor_mz", "peaks"};
  return columns;
}

// Maps logical column names to the header names used in a particular file.
// Unmapped names are looked up under their own name.
struct ColumnMap {
  std::map<std::string, std::string> header_for;

  std::string header(const std::string& logical) const {
    const auto it = header_for.find(logical);
    return it == header_for.end() ? logical : it->second;
  }
};

// Header-led TSV with one record per row. `fields` of each record hold the
// logical column names that were present, then any other columns under their
// header names, values trimmed. record_id and
// peaks columns are required; rows with a wrong cell count, duplicate id, bad
// peak list or bad precursor_mz are skipped and reported.
inline ParseResult parse_tsv(std::istream& in, const ColumnMap& columns = {}) {
  for (const auto& [logical, header] : columns.header_for) {
    const auto& known = dataset_columns();
    if (std::find(known.begin(), known.end(), logical) == known.end()) {
      throw UsageError("unknown dataset column '" + logical + "' in column map");
    }
  }
  ParseResult result;
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::string> header;
  while (detail::read_line(in, line, line_no)) {
    if (text::trim(line).empty() || line.front() == '#') continue;
    for (auto cell : text::split(line, '\t')) header.emplace_back(text::trim(cell));
    break;
  }
  if (header.empty()) return result;

  std::vector<std::pair<std::string, std::size_t>> index;  // logical name -> cell
  for (const auto& logical : dataset_columns()) {
    const std::string name = columns.header(logical);
    const auto it = std::find(header.begin(), header.end(), name);
    if (it != header.end()) index.emplace_back(logical, static_cast<std::size_t>(it - header.begin()));
  }
  std::vector<std::size_t> extra;
  for (std::size_t c = 0; c < header.size(); ++c) {
    const bool used = std::any_of(index.begin(), index.end(), [&](const auto& p) { return p.second == c; });
    if (!used && !header[c].empty()) extra.push_back(c);
  }
  for (const char* required : {"record_id", "peaks"}) {
    const bool found = std::any_of(index.begin(), index.end(), [&](const auto& p) { return p.first == required; });
    if (!found) {
      throw ParseError("TSV header lacks required column '" + columns.header(required) + "'", line_no, 0);
    }
  }

  std::set<std::string> seen;
  while (detail::read_line(in, line, line_no)) {
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cells = text::split(line, '\t');
    auto skip = [&](const std::string& why) {
      ++result.skipped;
      result.diagnostics.push_back({line_no, why});
    };
    if (cells.size() != header.size()) {
      skip("expected " + std::to_string(header.size()) + " cells, found " + std::to_string(cells.size()));
      continue;
    }
    Fields fields;
    for (const auto& [logical, cell] : index) fields.emplace_back(logical, std::string(text::trim(cells[cell])));
    for (std::size_t c : extra) fields.emplace_back(header[c], std::string(text::trim(cells[c])));
    const std::string id = *find_field(fields, "record_id");
    if (id.empty()) {
      skip("empty record_id");
      continue;
    }
    if (!seen.insert(id).second) {
      skip("duplicate record_id '" + id + "'");
      continue;
    }
    std::optional<double> precursor;
    if (const auto p = find_field(fields, "precursor_mz"); p && !p->empty() && *p != "NA") {
      precursor = text::parse_double(*p);
      if (!precursor) {
        skip("record '" + id + "': precursor_mz '" + *p + "' is not a number");
        continue;
      }
    }
    try {
      auto peaks = parse_peak_list(*find_field(fields, "peaks"));
      result.records.push_back({Spectrum(std::move(peaks), precursor, id), std::move(fields), line_no});
    } catch (const DataError& e) {
      skip("record '" + id + "': " + e.what());
    }
  }
  return result;
}

}  // namespace msbench::spectra
