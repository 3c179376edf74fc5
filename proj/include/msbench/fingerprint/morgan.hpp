#pragma once

#include <algorithm>
#include <cstdint>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/fingerprint/fingerprint.hpp"
#include "msbench/hash.hpp"
#include "msbench/mol/fragments.hpp"
#include "msbench/mol/molecule.hpp"

namespace msbench::fp {

namespace detail {
inline constexpr std::uint64_t kAtomSeed = 0x6d6f7267616e3030ULL;   // "morgan00"
inline constexpr std::uint64_t kRoundSeed = 0x6d6f7267616e7272ULL;  // "morganrr"

inline std::uint64_t atom_invariant(const mol::Molecule& mol, int a) {
  const mol::Atom& atom = mol.atom(a);
  std::uint64_t h = kAtomSeed;
  h = hash_combine(h, static_cast<std::uint64_t>(atom.element));
  h = hash_combine(h, static_cast<std::uint64_t>(mol.degree(a)));
  h = hash_combine(h, static_cast<std::uint64_t>(mol.hydrogen_count(a)));
  h = hash_combine(h, static_cast<std::uint64_t>(static_cast<std::int64_t>(atom.formal_charge)));
  h = hash_combine(h, atom.in_ring ? 1U : 0U);
  h = hash_combine(h, atom.aromatic ? 1U : 0U);
  return h;
}
}  // namespace detail

// Identifiers of every circular environment up to `radius`, per round.
// rounds[0] are the atom invariants; rounds[k][a] is atom a's identifier
// after k rounds of neighbor aggregation.
inline std::vector<std::vector<std::uint64_t>> morgan_rounds(const mol::Molecule& mol, int radius) {
  if (radius < 0) throw UsageError("Morgan radius must be non-negative");
  const int n = mol.atom_count();
  std::vector<std::vector<std::uint64_t>> rounds;
  rounds.reserve(static_cast<std::size_t>(radius) + 1);
  std::vector<std::uint64_t> ids(static_cast<std::size_t>(n));
  for (int a = 0; a < n; ++a) ids[a] = detail::atom_invariant(mol, a);
  rounds.push_back(ids);

  std::vector<std::pair<std::uint64_t, std::uint64_t>> env;
  for (int round = 1; round <= radius; ++round) {
    const auto& prev = rounds.back();
    std::vector<std::uint64_t> next(static_cast<std::size_t>(n));
    for (int a = 0; a < n; ++a) {
      if (mol.degree(a) == 0) {
        next[a] = prev[a];  // nothing to expand
        continue;
      }
      env.clear();
      for (const mol::Neighbor& nb : mol.neighbors(a)) {
        env.emplace_back(static_cast<std::uint64_t>(mol.bond(nb.bond).order), prev[nb.atom]);
      }
      std::sort(env.begin(), env.end());
      std::uint64_t h = hash_combine(detail::kRoundSeed, static_cast<std::uint64_t>(round));
      h = hash_combine(h, prev[a]);
      for (const auto& [code, id] : env) {
        h = hash_combine(h, code);
        h = hash_combine(h, id);
      }
      next[a] = h;
    }
    rounds.push_back(std::move(next));
  }
  return rounds;
}

// Sorted, duplicate-free identifier set over all rounds.
inline std::vector<std::uint64_t> morgan_identifiers(const mol::Molecule& mol, int radius) {
  std::vector<std::uint64_t> all;
  for (const auto& round : morgan_rounds(mol, radius)) all.insert(all.end(), round.begin(), round.end());
  std::sort(all.begin(), all.end());
  all.erase(std::unique(all.begin(), all.end()), all.end());
  return all;
}

// Binary Morgan fingerprint of the largest fragment; identifier -> bit (id mod bits).
inline FingerprintBits morgan_fingerprint(const mol::Molecule& mol,
                                          int radius = FingerprintBits::kDefaultRadius,
                                          std::size_t bits = FingerprintBits::kDefaultBits) {
  FingerprintBits fp(bits, radius);
  const mol::Molecule fragment = mol::largest_fragment(mol);
  for (std::uint64_t id : morgan_identifiers(fragment, radius)) fp.set(id % bits);
  return fp;
}

}  // namespace msbench::fp
