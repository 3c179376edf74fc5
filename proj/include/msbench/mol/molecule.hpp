#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/mol/element.hpp"
#include "msbench/mol/graph.hpp"

namespace msbench::mol {

enum class BondOrder : std::uint8_t { Single = 1, Double = 2, Triple = 3, Aromatic = 4 };

// Bond order in half-valence units (aromatic = 1.5 -> 3).
constexpr int half_valence(BondOrder order) {
  switch (order) {
    case BondOrder::Single: return 2;
    case BondOrder::Double: return 4;
    case BondOrder::Triple: return 6;
    case BondOrder::Aromatic: return 3;
  }
  return 2;
}

struct Atom {
  int element = kCarbon;
  bool aromatic = false;
  int formal_charge = 0;
  std::optional<int> isotope;
  // Hydrogen count written inside brackets; always 0 for bare atoms.
  int explicit_h = 0;
  // Written as a bracket atom. Bracket atoms never receive implicit hydrogens.
  bool bracket = false;
  bool in_ring = false;  // derived

  friend bool operator==(const Atom&, const Atom&) = default;
};

struct Bond {
  int begin = 0;
  int end = 0;
  BondOrder order = BondOrder::Single;
  bool in_ring = false;  // derived

  int other(int atom) const { return atom == begin ? end : begin; }
  friend bool operator==(const Bond&, const Bond&) = default;
};

struct Neighbor {
  int atom;
  int bond;
};

// Implicit hydrogens for a bare atom. Bond orders are summed in half-valence
// units with aromatic bonds counting 1.5. Aromatic atoms use their lowest
// valence; others the smallest allowed valence that fits. `overflow` is set
// when even the smallest Kekule assignment (aromatic bonds as single) exceeds
// every allowed valence.
inline int implicit_hydrogen_count(int element, bool aromatic, int bond_half_sum,
                                   int aromatic_bonds, bool* overflow = nullptr) {
  const auto valences = default_valences(element);
  if (overflow != nullptr) *overflow = false;
  if (valences.empty()) return 0;
  const int kekule_half_sum = bond_half_sum - aromatic_bonds;
  if (overflow != nullptr) *overflow = (kekule_half_sum + 1) / 2 > valences.back();
  if (aromatic) return std::max(0, (2 * valences.front() - bond_half_sum) / 2);
  for (int v : valences) {
    if (2 * v >= bond_half_sum) return (2 * v - bond_half_sum) / 2;
  }
  return 0;
}

// Immutable molecular graph. Derived data (adjacency, ring flags, fragment
// count, hydrogen counts) is computed once at construction.
class Molecule {
 public:
  Molecule() = default;

  Molecule(std::vector<Atom> atoms, std::vector<Bond> bonds, std::string source_smiles = {})
      : atoms_(std::move(atoms)), bonds_(std::move(bonds)), source_smiles_(std::move(source_smiles)) {
    const int n = atom_count();
    adjacency_.assign(atoms_.size(), {});
    for (std::size_t b = 0; b < bonds_.size(); ++b) {
      const Bond& bond = bonds_[b];
      if (bond.begin < 0 || bond.begin >= n || bond.end < 0 || bond.end >= n) {
        throw DataError("bond " + std::to_string(b) + " references a missing atom");
      }
      if (bond.begin == bond.end) {
        throw DataError("bond " + std::to_string(b) + " joins an atom to itself");
      }
      for (const Neighbor& nb : adjacency_[bond.begin]) {
        if (nb.atom == bond.end) {
          throw DataError("duplicate bond between atoms " + std::to_string(bond.begin) + " and " +
                          std::to_string(bond.end));
        }
      }
      adjacency_[bond.begin].push_back({bond.end, static_cast<int>(b)});
      adjacency_[bond.end].push_back({bond.begin, static_cast<int>(b)});
    }

    std::vector<graph::Edge> edges;
    edges.reserve(bonds_.size());
    for (const Bond& bond : bonds_) edges.push_back({bond.begin, bond.end});
    const auto ring = graph::cycle_edges(n, edges);
    for (auto& atom : atoms_) atom.in_ring = false;
    for (std::size_t b = 0; b < bonds_.size(); ++b) {
      bonds_[b].in_ring = ring[b];
      if (ring[b]) {
        atoms_[bonds_[b].begin].in_ring = true;
        atoms_[bonds_[b].end].in_ring = true;
      }
    }
    graph::connected_components(n, edges, &fragment_count_);

    total_h_.assign(atoms_.size(), 0);
    for (int a = 0; a < n; ++a) {
      const Atom& atom = atoms_[a];
      if (atom.bracket) {
        total_h_[a] = atom.explicit_h;
        continue;
      }
      int half_sum = 0;
      int aromatic_bonds = 0;
      for (const Neighbor& nb : adjacency_[a]) {
        half_sum += half_valence(bonds_[nb.bond].order);
        aromatic_bonds += bonds_[nb.bond].order == BondOrder::Aromatic ? 1 : 0;
      }
      bool overflow = false;
      total_h_[a] =
          implicit_hydrogen_count(atom.element, atom.aromatic, half_sum, aromatic_bonds, &overflow);
      if (overflow) ++valence_overflow_count_;
    }
  }

  int atom_count() const { return static_cast<int>(atoms_.size()); }
  int bond_count() const { return static_cast<int>(bonds_.size()); }
  std::span<const Atom> atoms() const { return atoms_; }
  std::span<const Bond> bonds() const { return bonds_; }
  const Atom& atom(int i) const { return atoms_.at(static_cast<std::size_t>(i)); }
  const Bond& bond(int i) const { return bonds_.at(static_cast<std::size_t>(i)); }
  std::span<const Neighbor> neighbors(int atom) const {
    return adjacency_.at(static_cast<std::size_t>(atom));
  }
  int degree(int atom) const { return static_cast<int>(neighbors(atom).size()); }
  int fragment_count() const { return fragment_count_; }
  const std::string& source_smiles() const { return source_smiles_; }

  // Total attached hydrogens: bracket count, or implicit from default valence.
  int hydrogen_count(int atom) const { return total_h_.at(static_cast<std::size_t>(atom)); }

  // Number of bare atoms whose bonds exceed every allowed valence (their
  // implicit hydrogen count was clamped to 0).
  int valence_overflow_count() const { return valence_overflow_count_; }
  bool has_valence_overflow() const { return valence_overflow_count_ > 0; }

  // Index of the bond between two atoms, if any.
  std::optional<int> bond_between(int a, int b) const {
    for (const Neighbor& nb : neighbors(a)) {
      if (nb.atom == b) return nb.bond;
    }
    return std::nullopt;
  }

 private:
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::vector<Neighbor>> adjacency_;
  std::vector<int> total_h_;
  std::string source_smiles_;
  int fragment_count_ = 0;
  int valence_overflow_count_ = 0;
};

inline int implicit_hydrogens(const Molecule& mol, int atom_index) {
  if (atom_index < 0 || atom_index >= mol.atom_count()) {
    throw UsageError("atom index " + std::to_string(atom_index) + " out of range");
  }
  return mol.hydrogen_count(atom_index);
}

// Subgraph induced by the atoms with keep[i] == true, atom order preserved.
inline Molecule induced_subgraph(const Molecule& mol, const std::vector<bool>& keep) {
  std::vector<int> new_index(static_cast<std::size_t>(mol.atom_count()), -1);
  std::vector<Atom> atoms;
  for (int a = 0; a < mol.atom_count(); ++a) {
    if (!keep[a]) continue;
    new_index[a] = static_cast<int>(atoms.size());
    atoms.push_back(mol.atom(a));
  }
  std::vector<Bond> bonds;
  for (const Bond& b : mol.bonds()) {
    if (keep[b.begin] && keep[b.end]) bonds.push_back({new_index[b.begin], new_index[b.end], b.order});
  }
  return Molecule(std::move(atoms), std::move(bonds));
}

// Connected components as separate molecules, ordered by their lowest atom index.
inline std::vector<Molecule> split_fragments(const Molecule& mol) {
  std::vector<graph::Edge> edges;
  for (const Bond& b : mol.bonds()) edges.push_back({b.begin, b.end});
  int count = 0;
  const auto label = graph::connected_components(mol.atom_count(), edges, &count);
  std::vector<Molecule> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int c = 0; c < count; ++c) {
    std::vector<bool> keep(static_cast<std::size_t>(mol.atom_count()));
    for (int a = 0; a < mol.atom_count(); ++a) keep[a] = label[a] == c;
    out.push_back(induced_subgraph(mol, keep));
  }
  return out;
}

inline int heavy_atom_count(const Molecule& mol) {
  return static_cast<int>(std::count_if(mol.atoms().begin(), mol.atoms().end(),
                                        [](const Atom& a) { return a.element != kHydrogen; }));
}

}  // namespace msbench::mol
