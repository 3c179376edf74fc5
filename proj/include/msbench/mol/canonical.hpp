#pragma once

#include <algorithm>
#include <cctype>
#include <cstdlib>
#include <map>
#include <numeric>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "msbench/mol/element.hpp"
#include "msbench/mol/molecule.hpp"

namespace msbench::mol {

namespace detail {

// Upper bound on complete labelings compared during tie-breaking. Ties that
// survive refinement are almost always symmetry orbits, where every labeling
// gives the same string, so the bound only matters for pathological graphs.
inline constexpr int kCanonicalLeafBudget = 512;

inline int bond_code(BondOrder order) { return static_cast<int>(order); }

// rank[a] = number of atoms with a strictly smaller key.
template <typename Key>
std::vector<int> ranks_from_keys(const std::vector<Key>& keys) {
  const int n = static_cast<int>(keys.size());
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) { return keys[a] < keys[b]; });
  std::vector<int> rank(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    rank[order[i]] = (i > 0 && keys[order[i]] == keys[order[i - 1]]) ? rank[order[i - 1]] : i;
  }
  return rank;
}

inline int distinct_count(const std::vector<int>& rank) {
  std::vector<int> r = rank;
  std::sort(r.begin(), r.end());
  return static_cast<int>(std::unique(r.begin(), r.end()) - r.begin());
}

inline std::vector<int> initial_ranks(const Molecule& mol) {
  using Key = std::tuple<int, int, int, int, int, int>;
  std::vector<Key> keys;
  keys.reserve(static_cast<std::size_t>(mol.atom_count()));
  for (int a = 0; a < mol.atom_count(); ++a) {
    const Atom& atom = mol.atom(a);
    keys.emplace_back(atom.element, atom.formal_charge, atom.isotope.value_or(-1),
                      atom.aromatic ? 1 : 0, mol.degree(a), mol.hydrogen_count(a));
  }
  return ranks_from_keys(keys);
}

// Iterated neighborhood refinement until the partition stops splitting.
inline void refine(const Molecule& mol, std::vector<int>& rank) {
  int classes = distinct_count(rank);
  using Signature = std::pair<int, std::vector<std::pair<int, int>>>;
  std::vector<Signature> sig(rank.size());
  while (classes < mol.atom_count()) {
    for (int a = 0; a < mol.atom_count(); ++a) {
      auto& nbrs = sig[a].second;
      nbrs.clear();
      for (const Neighbor& nb : mol.neighbors(a)) {
        nbrs.emplace_back(rank[nb.atom], bond_code(mol.bond(nb.bond).order));
      }
      std::sort(nbrs.begin(), nbrs.end());
      sig[a].first = rank[a];
    }
    rank = ranks_from_keys(sig);
    const int next = distinct_count(rank);
    if (next == classes) break;
    classes = next;
  }
}

inline std::string bond_symbol(const Molecule& mol, int bond) {
  const Bond& b = mol.bond(bond);
  const bool both_aromatic = mol.atom(b.begin).aromatic && mol.atom(b.end).aromatic;
  switch (b.order) {
    case BondOrder::Single: return both_aromatic ? "-" : "";
    case BondOrder::Double: return "=";
    case BondOrder::Triple: return "#";
    case BondOrder::Aromatic: return both_aromatic ? "" : ":";
  }
  return "";
}

inline std::string atom_symbol(const Molecule& mol, int a) {
  const Atom& atom = mol.atom(a);
  std::string symbol(element_symbol(atom.element));
  if (atom.aromatic) symbol[0] = static_cast<char>(std::tolower(static_cast<unsigned char>(symbol[0])));
  const int h = mol.hydrogen_count(a);

  bool bare = !atom.isotope && atom.formal_charge == 0 && is_organic_subset(atom.element);
  if (bare && atom.aromatic) bare = symbol.size() == 1;
  if (bare) {
    int half_sum = 0;
    int aromatic_bonds = 0;
    for (const Neighbor& nb : mol.neighbors(a)) {
      half_sum += half_valence(mol.bond(nb.bond).order);
      aromatic_bonds += mol.bond(nb.bond).order == BondOrder::Aromatic ? 1 : 0;
    }
    bare = implicit_hydrogen_count(atom.element, atom.aromatic, half_sum, aromatic_bonds) == h;
  }
  if (bare) return symbol;

  std::string out = "[";
  if (atom.isotope) out += std::to_string(*atom.isotope);
  out += symbol;
  if (h > 0) {
    out += 'H';
    if (h > 1) out += std::to_string(h);
  }
  if (atom.formal_charge != 0) {
    out += atom.formal_charge > 0 ? '+' : '-';
    const int magnitude = std::abs(atom.formal_charge);
    if (magnitude > 1) out += std::to_string(magnitude);
  }
  out += ']';
  return out;
}

inline std::string ring_label(int digit) {
  return digit < 10 ? std::string(1, static_cast<char>('0' + digit)) : "%" + std::to_string(digit);
}

// Depth-first SMILES emission for a complete (all-distinct) ranking.
class RankedWriter {
 public:
  RankedWriter(const Molecule& mol, const std::vector<int>& rank) : mol_(mol), rank_(rank) {
    const auto n = static_cast<std::size_t>(mol.atom_count());
    visited_.assign(n, false);
    tree_bond_.assign(static_cast<std::size_t>(mol.bond_count()), false);
    ring_bond_.assign(static_cast<std::size_t>(mol.bond_count()), false);
    children_.assign(n, {});
    closings_.assign(n, {});
    openings_.assign(n, {});
    position_.assign(n, -1);
  }

  std::string write() {
    std::vector<int> by_rank(static_cast<std::size_t>(mol_.atom_count()));
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::sort(by_rank.begin(), by_rank.end(), [&](int a, int b) { return rank_[a] < rank_[b]; });
    std::string out;
    for (int root : by_rank) {
      if (visited_[root]) continue;
      plan(root, -1);
      if (!out.empty()) out += '.';
      emit(root, out);
    }
    return out;
  }

 private:
  void plan(int a, int parent_bond) {
    visited_[a] = true;
    position_[a] = counter_++;
    std::vector<Neighbor> nbrs(mol_.neighbors(a).begin(), mol_.neighbors(a).end());
    std::sort(nbrs.begin(), nbrs.end(),
              [&](const Neighbor& x, const Neighbor& y) { return rank_[x.atom] < rank_[y.atom]; });
    for (const Neighbor& nb : nbrs) {
      if (nb.bond == parent_bond || tree_bond_[nb.bond] || ring_bond_[nb.bond]) continue;
      if (visited_[nb.atom]) {
        ring_bond_[nb.bond] = true;
        openings_[nb.atom].push_back(nb.bond);
        closings_[a].push_back(nb.bond);
      } else {
        tree_bond_[nb.bond] = true;
        children_[a].push_back(nb);
        plan(nb.atom, nb.bond);
      }
    }
  }

  void emit(int a, std::string& out) {
    out += atom_symbol(mol_, a);

    auto by_partner_position = [&](int atom) {
      return [&, atom](int x, int y) {
        return position_[mol_.bond(x).other(atom)] < position_[mol_.bond(y).other(atom)];
      };
    };
    std::sort(closings_[a].begin(), closings_[a].end(), by_partner_position(a));
    std::sort(openings_[a].begin(), openings_[a].end(), by_partner_position(a));

    std::vector<int> freed;
    for (int bond : closings_[a]) {
      const int digit = digit_of_bond_.at(bond);
      out += ring_label(digit);
      freed.push_back(digit);
    }
    for (int bond : openings_[a]) {
      int digit = 1;
      while (std::find(in_use_.begin(), in_use_.end(), digit) != in_use_.end()) ++digit;
      in_use_.push_back(digit);
      digit_of_bond_[bond] = digit;
      out += bond_symbol(mol_, bond);
      out += ring_label(digit);
    }
    for (int digit : freed) std::erase(in_use_, digit);

    const auto& kids = children_[a];
    for (std::size_t i = 0; i < kids.size(); ++i) {
      const bool last = i + 1 == kids.size();
      if (!last) out += '(';
      out += bond_symbol(mol_, kids[i].bond);
      emit(kids[i].atom, out);
      if (!last) out += ')';
    }
  }

  const Molecule& mol_;
  const std::vector<int>& rank_;
  std::vector<bool> visited_;
  std::vector<bool> tree_bond_;
  std::vector<bool> ring_bond_;
  std::vector<std::vector<Neighbor>> children_;
  std::vector<std::vector<int>> closings_;
  std::vector<std::vector<int>> openings_;
  std::vector<int> position_;
  std::vector<int> in_use_;
  std::map<int, int> digit_of_bond_;
  int counter_ = 0;
};

inline void canonical_search(const Molecule& mol, std::vector<int> rank, int& budget,
                             std::string& best, bool& have_best) {
  refine(mol, rank);
  const int n = mol.atom_count();
  std::vector<int> cell_size(static_cast<std::size_t>(n), 0);
  for (int r : rank) ++cell_size[r];
  int target = -1;
  for (int r = 0; r < n; ++r) {
    if (cell_size[r] > 1) {
      target = r;
      break;
    }
  }
  if (target < 0) {
    std::string candidate = RankedWriter(mol, rank).write();
    if (!have_best || candidate < best) {
      best = std::move(candidate);
      have_best = true;
    }
    --budget;
    return;
  }
  bool first = true;
  for (int a = 0; a < n; ++a) {
    if (rank[a] != target) continue;
    if (!first && budget <= 0) break;
    first = false;
    std::vector<int> split = rank;
    for (int b = 0; b < n; ++b) {
      if (rank[b] == target && b != a) split[b] = target + 1;
    }
    canonical_search(mol, std::move(split), budget, best, have_best);
  }
}

}  // namespace detail

// Deterministic SMILES for the molecular graph: refinement ranking on
// (element, charge, isotope, aromatic, degree, H count) plus bond orders,
// remaining ties broken by the lexicographically smallest output string,
// then depth-first emission in rank order.
inline std::string canonical_form(const Molecule& mol) {
  if (mol.atom_count() == 0) return {};
  int budget = detail::kCanonicalLeafBudget;
  std::string best;
  bool have_best = false;
  detail::canonical_search(mol, detail::initial_ranks(mol), budget, best, have_best);
  return best;
}

}  // namespace msbench::mol
