#pragma once

#include <array>
#include <optional>
#include <span>
#include <string_view>

namespace msbench::mol {

inline constexpr std::array<std::string_view, 119> kElementSymbols = {
    "*",  "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg", "Al", "Si",
    "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr", "Mn", "Fe", "Co", "Ni", "Cu",
    "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr", "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru",
    "Rh", "Pd", "Ag", "Cd", "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr",
    "Nd", "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf", "Ta", "W",
    "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po", "At", "Rn", "Fr", "Ra", "Ac",
    "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm", "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf",
    "Db", "Sg", "Bh", "Hs", "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og"};

inline constexpr int kHydrogen = 1;
inline constexpr int kCarbon = 6;
inline constexpr int kNitrogen = 7;
inline constexpr int kOxygen = 8;

inline std::string_view element_symbol(int atomic_number) {
  return kElementSymbols.at(static_cast<std::size_t>(atomic_number));
}

// Atomic number for an exact, case-sensitive symbol ("Cl", not "CL").
inline std::optional<int> element_from_symbol(std::string_view symbol) {
  for (std::size_t z = 1; z < kElementSymbols.size(); ++z) {
    if (kElementSymbols[z] == symbol) return static_cast<int>(z);
  }
  return std::nullopt;
}

// Organic subset: may be written without brackets.
inline bool is_organic_subset(int z) {
  switch (z) {
    case 5: case 6: case 7: case 8: case 9: case 15: case 16: case 17: case 35: case 53:
      return true;
    default:
      return false;
  }
}

// Elements accepted as lowercase aromatic atoms. Only b c n o p s may appear
// outside brackets; se, as and te need a bracket.
inline bool may_be_aromatic(int z) {
  switch (z) {
    case 5: case 6: case 7: case 8: case 15: case 16: case 33: case 34: case 52:
      return true;
    default:
      return false;
  }
}

// Allowed valences for organic-subset atoms, ascending. Empty for other elements.
inline std::span<const int> default_valences(int z) {
  static constexpr int kB[] = {3};
  static constexpr int kC[] = {4};
  static constexpr int kN[] = {3, 5};
  static constexpr int kO[] = {2};
  static constexpr int kP[] = {3, 5};
  static constexpr int kS[] = {2, 4, 6};
  static constexpr int kHalogen[] = {1};
  switch (z) {
    case 5: return kB;
    case 6: return kC;
    case 7: return kN;
    case 8: return kO;
    case 15: return kP;
    case 16: return kS;
    case 9: case 17: case 35: case 53: return kHalogen;
    default: return {};
  }
}

// Mass of the most abundant isotope in daltons, for elements supported by
// candidate generation. nullopt for unsupported elements.
inline std::optional<double> monoisotopic_mass(int z) {
  switch (z) {
    case 1: return 1.00782503207;
    case 5: return 11.0093054;
    case 6: return 12.0;
    case 7: return 14.0030740048;
    case 8: return 15.99491461956;
    case 9: return 18.99840322;
    case 11: return 22.9897692809;
    case 14: return 27.9769265325;
    case 15: return 30.97376163;
    case 16: return 31.97207100;
    case 17: return 34.96885268;
    case 19: return 38.96370668;
    case 33: return 74.9215965;
    case 34: return 79.9165213;
    case 35: return 78.9183371;
    case 53: return 126.904473;
    default: return std::nullopt;
  }
}

}  // namespace msbench::mol
