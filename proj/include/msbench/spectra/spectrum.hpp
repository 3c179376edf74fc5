#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/text.hpp"

namespace msbench::spectra {

struct Peak {
  double mz = 0;         // Da
  double intensity = 0;  // arbitrary units

  friend bool operator==(const Peak&, const Peak&) = default;
};

// Centroided peak list, sorted by m/z with equal m/z values merged.
class Spectrum {
 public:
  Spectrum() = default;

  explicit Spectrum(std::vector<Peak> peaks, std::optional<double> precursor_mz = std::nullopt,
                    std::string record_id = {})
      : precursor_mz_(precursor_mz), record_id_(std::move(record_id)) {
    for (const Peak& p : peaks) {
      if (!std::isfinite(p.mz) || p.mz <= 0) {
        throw DataError("peak m/z must be positive, got " + text::format_number(p.mz));
      }
      if (!std::isfinite(p.intensity) || p.intensity < 0) {
        throw DataError("peak intensity must be non-negative, got " + text::format_number(p.intensity));
      }
    }
    if (precursor_mz_ && (!std::isfinite(*precursor_mz_) || *precursor_mz_ <= 0)) {
      throw DataError("precursor m/z must be positive");
    }
    std::stable_sort(peaks.begin(), peaks.end(), [](const Peak& a, const Peak& b) { return a.mz < b.mz; });
    for (const Peak& p : peaks) {
      if (!peaks_.empty() && peaks_.back().mz == p.mz) {
        peaks_.back().intensity += p.intensity;
      } else {
        peaks_.push_back(p);
      }
    }
  }

  const std::vector<Peak>& peaks() const { return peaks_; }
  std::size_t size() const { return peaks_.size(); }
  bool empty() const { return peaks_.empty(); }
  const std::optional<double>& precursor_mz() const { return precursor_mz_; }
  const std::string& record_id() const { return record_id_; }
  void set_record_id(std::string id) { record_id_ = std::move(id); }

  double total_intensity() const {
    double sum = 0;
    for (const Peak& p : peaks_) sum += p.intensity;
    return sum;
  }

  bool has_signal() const {
    return std::any_of(peaks_.begin(), peaks_.end(), [](const Peak& p) { return p.intensity > 0; });
  }

  friend bool operator==(const Spectrum&, const Spectrum&) = default;

 private:
  std::vector<Peak> peaks_;
  std::optional<double> precursor_mz_;
  std::string record_id_;
};

}  // namespace msbench::spectra
