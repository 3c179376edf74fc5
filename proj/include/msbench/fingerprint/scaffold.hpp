#pragma once

#include <string>
#include <vector>

#include "msbench/mol/canonical.hpp"
#include "msbench/mol/fragments.hpp"
#include "msbench/mol/molecule.hpp"

namespace msbench::fp {

struct ScaffoldKey {
  std::string key;
  bool is_acyclic = true;

  friend bool operator==(const ScaffoldKey&, const ScaffoldKey&) = default;
  friend auto operator<=>(const ScaffoldKey& a, const ScaffoldKey& b) { return a.key <=> b.key; }
};

// Murcko framework graph: ring systems plus linkers, with atoms that hang off
// the framework by a double bond kept. Empty molecule when there is no ring.
inline mol::Molecule murcko_framework(const mol::Molecule& mol) {
  const int n = mol.atom_count();
  std::vector<bool> core(static_cast<std::size_t>(n), true);
  std::vector<int> degree(static_cast<std::size_t>(n));
  std::vector<int> queue;
  for (int a = 0; a < n; ++a) {
    degree[a] = mol.degree(a);
    if (degree[a] <= 1) queue.push_back(a);
  }
  while (!queue.empty()) {
    const int a = queue.back();
    queue.pop_back();
    if (!core[a]) continue;
    core[a] = false;
    for (const mol::Neighbor& nb : mol.neighbors(a)) {
      if (core[nb.atom] && --degree[nb.atom] <= 1) queue.push_back(nb.atom);
    }
  }
  std::vector<bool> keep = core;
  for (int a = 0; a < n; ++a) {
    if (!core[a]) continue;
    for (const mol::Neighbor& nb : mol.neighbors(a)) {
      if (!core[nb.atom] && mol.bond(nb.bond).order == mol::BondOrder::Double) keep[nb.atom] = true;
    }
  }
  // Hydrogens replace removed substituents. Aromatic and bracket atoms cannot
  // regain them through the default valence rule, so they become explicit.
  std::vector<mol::Atom> atoms;
  std::vector<int> new_index(static_cast<std::size_t>(n), -1);
  for (int a = 0; a < n; ++a) {
    if (!keep[a]) continue;
    mol::Atom atom = mol.atom(a);
    int removed = 0;
    for (const mol::Neighbor& nb : mol.neighbors(a)) {
      if (!keep[nb.atom]) removed += mol::half_valence(mol.bond(nb.bond).order) / 2;
    }
    if (removed > 0 && (atom.bracket || atom.aromatic)) {
      atom.explicit_h = mol.hydrogen_count(a) + removed;
      atom.bracket = true;
    }
    new_index[a] = static_cast<int>(atoms.size());
    atoms.push_back(atom);
  }
  std::vector<mol::Bond> bonds;
  for (const mol::Bond& b : mol.bonds()) {
    if (keep[b.begin] && keep[b.end]) bonds.push_back({new_index[b.begin], new_index[b.end], b.order});
  }
  return mol::Molecule(std::move(atoms), std::move(bonds));
}

// Scaffold key of the largest fragment; empty and acyclic when it has no ring.
inline ScaffoldKey murcko_scaffold(const mol::Molecule& mol) {
  const mol::Molecule framework = murcko_framework(mol::largest_fragment(mol));
  if (framework.atom_count() == 0) return {};
  return {mol::canonical_form(framework), false};
}

}  // namespace msbench::fp
