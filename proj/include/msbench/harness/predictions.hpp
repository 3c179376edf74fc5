#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <istream>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/spectra/binning.hpp"
#include "msbench/text.hpp"

namespace msbench::harness {

// Non-zero bins only, ascending by bin.
struct PredictionRow {
  std::string record_id;
  std::size_t bins = 0;
  std::vector<std::pair<std::uint32_t, double>> entries;
  std::size_t line = 0;

  std::vector<double> dense() const {
    std::vector<double> v(bins, 0.0);
    for (const auto& [b, x] : entries) v[b] = x;
    return v;
  }

  static PredictionRow from_dense(std::string id, const std::vector<double>& values) {
    PredictionRow r{std::move(id), values.size(), {}, 0};
    for (std::size_t i = 0; i < values.size(); ++i) {
      if (values[i] != 0) r.entries.emplace_back(static_cast<std::uint32_t>(i), values[i]);
    }
    return r;
  }
};

struct PredictionFile {
  double resolution = 0;
  double max_mz = spectra::kDefaultMaxMz;
  std::vector<PredictionRow> rows;
};

namespace detail {
inline std::optional<double> header_value(std::string_view line, std::string_view key) {
  for (auto token : text::split_whitespace(line)) {
    if (token.size() > key.size() && token.substr(0, key.size()) == key && token[key.size()] == '=') {
      return text::parse_double(token.substr(key.size() + 1));
    }
  }
  return std::nullopt;
}
}  // namespace detail

// Prediction TSV: "# resolution=R max_mz=M" header comment, then rows of
// record_id<TAB>values. Values are either dense ("v0,v1,...", exactly one
// per bin) or sparse ("bin:value bin:value", unlisted bins 0, may be empty);
// the form is detected per row. Without a header the given run binning is
// assumed; with one it must match the run binning.
inline PredictionFile read_predictions(std::istream& in, double resolution, double max_mz) {
  PredictionFile out;
  out.resolution = resolution;
  out.max_mz = max_mz;
  const std::size_t bins = spectra::bin_count(resolution, max_mz);
  std::string line;
  std::size_t line_no = 0;
  auto fail = [&](const std::string& why, std::size_t column = 0) {
    throw ParseError("prediction file line " + std::to_string(line_no) + ": " + why, line_no, column);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty()) continue;
    if (line.front() == '#') {
      const auto r = detail::header_value(line, "resolution");
      const auto m = detail::header_value(line, "max_mz");
      if (r && std::abs(*r - resolution) > 1e-12 * std::max(1.0, resolution)) {
        throw DataError("prediction file resolution " + text::format_number(*r) + " does not match run resolution " +
                        text::format_number(resolution));
      }
      if (m && std::abs(*m - max_mz) > 1e-9) {
        throw DataError("prediction file max_mz " + text::format_number(*m) + " does not match run max_mz " +
                        text::format_number(max_mz));
      }
      continue;
    }
    const auto tab = line.find('\t');
    const std::string id(text::trim(std::string_view(line).substr(0, tab)));
    if (id.empty()) fail("empty record id");
    if (id == "record_id") continue;  // optional header row
    const std::string_view body = tab == std::string::npos ? std::string_view() : std::string_view(line).substr(tab + 1);
    PredictionRow row{id, bins, {}, line_no};
    const std::size_t offset = tab == std::string::npos ? line.size() : tab + 1;
    if (body.find(':') != std::string_view::npos || text::trim(body).empty()) {
      std::vector<bool> set(bins, false);
      std::size_t pos = 0;
      for (auto token : text::split_whitespace(body)) {
        pos = static_cast<std::size_t>(token.data() - body.data());
        const auto colon = token.find(':');
        const auto bin = colon == std::string_view::npos ? std::nullopt : text::parse_int(token.substr(0, colon));
        const auto value = colon == std::string_view::npos ? std::nullopt : text::parse_double(token.substr(colon + 1));
        if (!bin || !value) fail("malformed sparse entry '" + std::string(token) + "'", offset + pos);
        if (*bin < 0 || static_cast<std::size_t>(*bin) >= bins) {
          fail("bin " + std::to_string(*bin) + " outside [0, " + std::to_string(bins) + ")", offset + pos);
        }
        if (*value < 0) fail("negative intensity", offset + pos);
        if (set[static_cast<std::size_t>(*bin)]) fail("bin " + std::to_string(*bin) + " listed twice", offset + pos);
        set[static_cast<std::size_t>(*bin)] = true;
        if (*value != 0) row.entries.emplace_back(static_cast<std::uint32_t>(*bin), *value);
      }
      std::sort(row.entries.begin(), row.entries.end());
    } else {
      const auto cells = text::split(body, ',');
      if (cells.size() != bins) {
        fail("dense row has " + std::to_string(cells.size()) + " values, expected " + std::to_string(bins));
      }
      for (std::size_t i = 0; i < bins; ++i) {
        const auto v = text::parse_double(text::trim(cells[i]));
        if (!v || *v < 0) fail("bad dense value '" + std::string(cells[i]) + "'", offset);
        if (*v != 0) row.entries.emplace_back(static_cast<std::uint32_t>(i), *v);
      }
    }
    out.rows.push_back(std::move(row));
  }
  return out;
}

inline void write_prediction_header(std::ostream& out, double resolution, double max_mz) {
  out << "# resolution=" << text::format_number(resolution) << " max_mz=" << text::format_number(max_mz) << '\n';
}

// One sparse row; only non-zero bins are listed, values written losslessly.
inline void write_prediction_row(std::ostream& out, const PredictionRow& row) {
  out << row.record_id << '\t';
  for (std::size_t i = 0; i < row.entries.size(); ++i) {
    out << (i ? " " : "") << row.entries[i].first << ':' << text::format_exact(row.entries[i].second);
  }
  out << '\n';
}

}  // namespace msbench::harness
