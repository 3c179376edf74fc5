#pragma once

#include <algorithm>
#include <cmath>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/mol/element.hpp"
#include "msbench/mol/molecule.hpp"
#include "msbench/mol/smiles_parser.hpp"
#include "msbench/text.hpp"

namespace msbench::harness {

inline constexpr double kElectronMass = 0.000548579909;
inline constexpr double kProtonMass = 1.007276466621;
inline constexpr std::size_t kDefaultCandidateCap = 10000;

// Mass of the most abundant isotope, or of the labelled isotope when given.
inline double isotope_mass(int element, std::optional<int> isotope = std::nullopt) {
  struct Entry {
    int z;
    int mass_number;
    double mass;
  };
  static constexpr Entry kTable[] = {
      {1, 1, 1.00782503207},   {1, 2, 2.01410177812},   {5, 11, 11.0093054},    {6, 12, 12.0},
      {6, 13, 13.00335483507}, {7, 14, 14.0030740048},  {7, 15, 15.0001088982}, {8, 16, 15.99491461956},
      {8, 18, 17.9991610},     {9, 19, 18.99840322},    {11, 23, 22.9897692809}, {14, 28, 27.9769265325},
      {15, 31, 30.97376163},   {16, 32, 31.97207100},   {17, 35, 34.96885268},  {19, 39, 38.96370668},
      {34, 80, 79.9165213},    {35, 79, 78.9183371},    {53, 127, 126.904473},
  };
  static constexpr int kMostAbundant[][2] = {{1, 1},   {5, 11},  {6, 12},  {7, 14},  {8, 16},  {9, 19}, {11, 23},
                                             {14, 28}, {15, 31}, {16, 32}, {17, 35}, {19, 39}, {34, 80}, {35, 79},
                                             {53, 127}};
  int mass_number = 0;
  if (isotope) {
    mass_number = *isotope;
  } else {
    for (const auto& m : kMostAbundant) {
      if (m[0] == element) mass_number = m[1];
    }
  }
  for (const auto& e : kTable) {
    if (e.z == element && e.mass_number == mass_number) return e.mass;
  }
  throw DomainError("no isotope mass for " + std::string(mol::element_symbol(element)) +
                    (isotope ? " (mass number " + std::to_string(*isotope) + ")" : std::string()));
}

// Monoisotopic mass including implicit and bracket hydrogens, less one
// electron per unit of positive charge.
inline double monoisotopic_mass(const mol::Molecule& m) {
  double mass = 0;
  int charge = 0;
  for (int a = 0; a < m.atom_count(); ++a) {
    const auto& atom = m.atom(a);
    mass += isotope_mass(atom.element, atom.isotope);
    mass += m.hydrogen_count(a) * isotope_mass(mol::kHydrogen);
    charge += atom.formal_charge;
  }
  return mass - charge * kElectronMass;
}

struct Adduct {
  int multimer = 1;  // nM
  double shift = 0;  // added to nM
  int charge = 1;    // absolute
};

// Common adducts by name, e.g. "[M+H]+".
inline Adduct adduct_from_string(std::string_view name) {
  static const std::map<std::string, Adduct> kAdducts = {
      {"[M+H]+", {1, kProtonMass, 1}},
      {"[M+Na]+", {1, 22.9897692809 - kElectronMass, 1}},
      {"[M+K]+", {1, 38.96370668 - kElectronMass, 1}},
      {"[M+NH4]+", {1, 14.0030740048 + 3 * 1.00782503207 + kProtonMass, 1}},
      {"[M+H-H2O]+", {1, kProtonMass - (2 * 1.00782503207 + 15.99491461956), 1}},
      {"[M-H2O+H]+", {1, kProtonMass - (2 * 1.00782503207 + 15.99491461956), 1}},
      {"[M]+", {1, -kElectronMass, 1}},
      {"[2M+H]+", {2, kProtonMass, 1}},
      {"[M+2H]2+", {1, 2 * kProtonMass, 2}},
      {"[M-H]-", {1, -kProtonMass, 1}},
      {"[M+Cl]-", {1, 34.96885268 + kElectronMass, 1}},
      {"[M+HCOO]-", {1, 1.00782503207 + 12.0 + 2 * 15.99491461956 + kElectronMass, 1}},
      {"[M+FA-H]-", {1, 1.00782503207 + 12.0 + 2 * 15.99491461956 + kElectronMass, 1}},
      {"[M]-", {1, kElectronMass, 1}},
      {"[2M-H]-", {2, -kProtonMass, 1}},
  };
  const auto it = kAdducts.find(std::string(text::trim(name)));
  if (it == kAdducts.end()) throw DataError("unsupported precursor type '" + std::string(name) + "'");
  return it->second;
}

inline double neutral_mass(double precursor_mz, const Adduct& a) {
  return (precursor_mz * a.charge - a.shift) / a.multimer;
}

struct Compound {
  std::string id;
  std::string smiles;
  double mass = 0;
};

struct CompoundLibrary {
  std::vector<Compound> compounds;  // sorted by mass, then id
  std::size_t rejected = 0;
  std::vector<std::string> notes;
};

// Compound TSV: compound_id<TAB>smiles, optional header. Unparseable
// structures are counted and left out.
inline CompoundLibrary read_compound_library(std::istream& in) {
  CompoundLibrary lib;
  std::string line;
  std::size_t line_no = 0;
  bool first = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cells = text::split(line, '\t');
    const bool header_allowed = std::exchange(first, false);
    if (cells.size() < 2) throw ParseError("compound file line " + std::to_string(line_no) + ": expected id<TAB>smiles", line_no, 0);
    const std::string id(text::trim(cells[0]));
    if (header_allowed && (id == "compound_id" || id == "id")) continue;
    const std::string smiles(text::trim(cells[1]));
    try {
      lib.compounds.push_back({id, smiles, monoisotopic_mass(mol::parse_smiles(smiles))});
    } catch (const Error& e) {
      ++lib.rejected;
      lib.notes.push_back("compound '" + id + "' (line " + std::to_string(line_no) + "): " + e.what());
    }
  }
  std::sort(lib.compounds.begin(), lib.compounds.end(),
            [](const Compound& a, const Compound& b) { return std::tie(a.mass, a.id) < std::tie(b.mass, b.id); });
  return lib;
}

// Compounds within `ppm` of the neutral mass, closest first (ties by id),
// at most `cap`.
inline std::vector<const Compound*> candidates_by_mass(const CompoundLibrary& lib, double mass, double ppm,
                                                       std::size_t cap = kDefaultCandidateCap) {
  if (!(ppm > 0)) throw UsageError("ppm tolerance must be positive");
  const double tol = mass * ppm * 1e-6;
  auto lo = std::lower_bound(lib.compounds.begin(), lib.compounds.end(), mass - tol,
                             [](const Compound& c, double m) { return c.mass < m; });
  std::vector<const Compound*> out;
  for (auto it = lo; it != lib.compounds.end() && it->mass <= mass + tol; ++it) out.push_back(&*it);
  std::sort(out.begin(), out.end(), [&](const Compound* a, const Compound* b) {
    const double da = std::abs(a->mass - mass), db = std::abs(b->mass - mass);
    return da != db ? da < db : a->id < b->id;
  });
  if (out.size() > cap) out.resize(cap);
  return out;
}

struct CandidateRow {
  std::string query_id;
  std::string candidate_id;
  std::string smiles;
  std::size_t line = 0;
};

// Candidate TSV: query_id<TAB>candidate_id<TAB>smiles, optional header.
inline std::vector<CandidateRow> read_candidates(std::istream& in) {
  std::vector<CandidateRow> out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (text::trim(line).empty() || line.front() == '#') continue;
    const auto cells = text::split(line, '\t');
    if (cells.size() != 3) {
      throw ParseError("candidate file line " + std::to_string(line_no) + ": expected 3 tab-separated cells", line_no, 0);
    }
    CandidateRow r{std::string(text::trim(cells[0])), std::string(text::trim(cells[1])),
                   std::string(text::trim(cells[2])), line_no};
    if (r.query_id == "query_id" && r.candidate_id == "candidate_id") continue;
    if (r.query_id.empty() || r.candidate_id.empty()) {
      throw ParseError("candidate file line " + std::to_string(line_no) + ": empty id", line_no, 0);
    }
    out.push_back(std::move(r));
  }
  return out;
}

inline void write_candidates(std::ostream& out, const std::vector<CandidateRow>& rows) {
  out << "query_id\tcandidate_id\tsmiles\n";
  for (const auto& r : rows) out << r.query_id << '\t' << r.candidate_id << '\t' << r.smiles << '\n';
}

}  // namespace msbench::harness
