#pragma once

#include <vector>

#include "msbench/mol/graph.hpp"
#include "msbench/mol/molecule.hpp"

namespace msbench::mol {

struct RingFlags {
  std::vector<bool> atom;
  std::vector<bool> bond;
};

// A bond is a ring bond iff it is not a bridge; an atom is a ring atom iff it
// touches a ring bond. Recomputed from the graph rather than read from the
// flags cached on the molecule.
inline RingFlags ring_membership(const Molecule& mol) {
  std::vector<graph::Edge> edges;
  edges.reserve(static_cast<std::size_t>(mol.bond_count()));
  for (const Bond& b : mol.bonds()) edges.push_back({b.begin, b.end});
  RingFlags flags;
  flags.bond = graph::cycle_edges(mol.atom_count(), edges);
  flags.atom.assign(static_cast<std::size_t>(mol.atom_count()), false);
  for (int b = 0; b < mol.bond_count(); ++b) {
    if (!flags.bond[b]) continue;
    flags.atom[mol.bond(b).begin] = true;
    flags.atom[mol.bond(b).end] = true;
  }
  return flags;
}

}  // namespace msbench::mol
