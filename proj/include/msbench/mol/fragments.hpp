#pragma once

#include <string>
#include <vector>

#include "msbench/mol/canonical.hpp"
#include "msbench/mol/molecule.hpp"

namespace msbench::mol {

// The fragment with the most heavy atoms; ties go to the fragment whose
// canonical form sorts first. Single-fragment molecules are returned as is.
inline Molecule largest_fragment(const Molecule& mol) {
  if (mol.fragment_count() <= 1) return mol;
  auto fragments = split_fragments(mol);
  std::size_t best = 0;
  int best_heavy = heavy_atom_count(fragments[0]);
  std::string best_key = canonical_form(fragments[0]);
  for (std::size_t i = 1; i < fragments.size(); ++i) {
    const int heavy = heavy_atom_count(fragments[i]);
    if (heavy < best_heavy) continue;
    std::string key = canonical_form(fragments[i]);
    if (heavy > best_heavy || key < best_key) {
      best = i;
      best_heavy = heavy;
      best_key = std::move(key);
    }
  }
  return std::move(fragments[best]);
}

}  // namespace msbench::mol
