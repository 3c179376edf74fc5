#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "msbench/error.hpp"

namespace msbench::fp {

// Fixed-length binary fingerprint with a cached popcount.
class FingerprintBits {
 public:
  static constexpr std::size_t kDefaultBits = 2048;
  static constexpr int kDefaultRadius = 2;

  explicit FingerprintBits(std::size_t bits = kDefaultBits, int radius = kDefaultRadius)
      : length_(bits), radius_(radius) {
    if (bits == 0 || !std::has_single_bit(bits)) {
      throw UsageError("fingerprint length must be a positive power of two, got " + std::to_string(bits));
    }
    if (radius < 0) throw UsageError("fingerprint radius must be non-negative");
    words_.assign((bits + 63) / 64, 0);
  }

  std::size_t size() const { return length_; }
  int radius() const { return radius_; }
  std::size_t popcount() const { return popcount_; }
  bool empty() const { return popcount_ == 0; }

  bool test(std::size_t bit) const { return (words_.at(bit / 64) >> (bit % 64)) & 1U; }

  void set(std::size_t bit) {
    auto& word = words_.at(bit / 64);
    const std::uint64_t mask = std::uint64_t{1} << (bit % 64);
    if ((word & mask) == 0) {
      word |= mask;
      ++popcount_;
    }
  }

  const std::vector<std::uint64_t>& words() const { return words_; }

  std::size_t intersection_count(const FingerprintBits& other) const {
    require_same_length(other);
    std::size_t c = 0;
    for (std::size_t i = 0; i < words_.size(); ++i) c += std::popcount(words_[i] & other.words_[i]);
    return c;
  }

  // Lowercase hex, most significant bit (index size()-1) first.
  std::string to_hex() const {
    static constexpr char kDigits[] = "0123456789abcdef";
    std::string out;
    const std::size_t nibbles = (length_ + 3) / 4;
    out.reserve(nibbles);
    for (std::size_t k = nibbles; k-- > 0;) {
      unsigned value = 0;
      for (std::size_t b = 4; b-- > 0;) {
        const std::size_t bit = k * 4 + b;
        value = (value << 1) | (bit < length_ && test(bit) ? 1U : 0U);
      }
      out += kDigits[value];
    }
    return out;
  }

  static FingerprintBits from_hex(std::string_view hex, int radius = kDefaultRadius) {
    FingerprintBits fp(hex.size() * 4, radius);
    for (std::size_t i = 0; i < hex.size(); ++i) {
      const char c = hex[i];
      unsigned value;
      if (c >= '0' && c <= '9') {
        value = static_cast<unsigned>(c - '0');
      } else if (c >= 'a' && c <= 'f') {
        value = static_cast<unsigned>(c - 'a' + 10);
      } else {
        throw DataError(std::string("invalid hex digit '") + c + "' in fingerprint");
      }
      const std::size_t k = hex.size() - 1 - i;
      for (std::size_t b = 0; b < 4; ++b) {
        if ((value >> b) & 1U) fp.set(k * 4 + b);
      }
    }
    return fp;
  }

  friend bool operator==(const FingerprintBits& a, const FingerprintBits& b) {
    return a.length_ == b.length_ && a.words_ == b.words_;
  }

 private:
  void require_same_length(const FingerprintBits& other) const {
    if (other.length_ != length_) {
      throw UsageError("fingerprint length mismatch: " + std::to_string(length_) + " vs " +
                       std::to_string(other.length_));
    }
  }

  std::size_t length_;
  int radius_;
  std::size_t popcount_ = 0;
  std::vector<std::uint64_t> words_;
};

// c / (a + b - c); 0.0 when both fingerprints are empty.
inline double tanimoto(const FingerprintBits& a, const FingerprintBits& b) {
  const std::size_t c = a.intersection_count(b);
  const std::size_t denom = a.popcount() + b.popcount() - c;
  if (denom == 0) return 0.0;
  return static_cast<double>(c) / static_cast<double>(denom);
}

}  // namespace msbench::fp
