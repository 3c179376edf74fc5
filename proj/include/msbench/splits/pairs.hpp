#pragma once

#include <cstdint>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/fingerprint/fingerprint.hpp"
#include "msbench/parallel.hpp"
#include "msbench/rng.hpp"

namespace msbench::splits {

inline constexpr std::size_t kDefaultPairs = 1'000'000;

namespace detail {
// Sampled pairs are drawn in fixed-size blocks, each from its own substream,
// so results do not depend on the number of worker threads.
inline constexpr std::size_t kPairBlock = 1 << 16;
}  // namespace detail

// Tanimoto similarities between fingerprints of `a` and `b` (within = false),
// or between distinct members of `a` (within = true, unordered i != j; `b` is
// ignored). Exhaustive when the pair count is at most n_pairs, otherwise
// n_pairs index pairs drawn uniformly with replacement.
inline std::vector<double> sample_tanimoto_pairs(const std::vector<fp::FingerprintBits>& a,
                                                 const std::vector<fp::FingerprintBits>& b, std::size_t n_pairs,
                                                 std::uint64_t seed, bool within, unsigned threads = 1) {
  if (a.empty() || (!within && b.empty())) throw UsageError("Tanimoto pair sampling needs non-empty sets");
  if (within && a.size() < 2) throw UsageError("within-set Tanimoto pairs need at least 2 fingerprints");
  const std::size_t na = a.size();
  const std::size_t nb = within ? na : b.size();
  const unsigned __int128 total = within ? static_cast<unsigned __int128>(na) * (na - 1) / 2
                                         : static_cast<unsigned __int128>(na) * nb;

  std::vector<double> out;
  if (total <= n_pairs) {
    out.reserve(static_cast<std::size_t>(total));
    for (std::size_t i = 0; i < na; ++i) {
      if (within) {
        for (std::size_t j = i + 1; j < na; ++j) out.push_back(fp::tanimoto(a[i], a[j]));
      } else {
        for (std::size_t j = 0; j < nb; ++j) out.push_back(fp::tanimoto(a[i], b[j]));
      }
    }
    return out;
  }

  out.resize(n_pairs);
  const std::size_t blocks = (n_pairs + detail::kPairBlock - 1) / detail::kPairBlock;
  parallel_for(blocks, threads, [&](std::size_t block) {
    Rng rng(substream_seed(seed, block));
    const std::size_t begin = block * detail::kPairBlock;
    const std::size_t end = std::min(n_pairs, begin + detail::kPairBlock);
    for (std::size_t k = begin; k < end; ++k) {
      const auto i = static_cast<std::size_t>(rng.uniform_index(na));
      if (within) {
        auto j = static_cast<std::size_t>(rng.uniform_index(na - 1));
        if (j >= i) ++j;
        out[k] = fp::tanimoto(a[i], a[j]);
      } else {
        out[k] = fp::tanimoto(a[i], b[static_cast<std::size_t>(rng.uniform_index(nb))]);
      }
    }
  });
  return out;
}

}  // namespace msbench::splits
