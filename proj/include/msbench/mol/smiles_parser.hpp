#pragma once

#include <array>
#include <cctype>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "msbench/error.hpp"
#include "msbench/mol/element.hpp"
#include "msbench/mol/molecule.hpp"

namespace msbench::mol {

enum class SmilesErrorKind {
  Syntax,
  UnmatchedRingClosure,
  UnknownElement,
  RingBondConflict,
  EmptyBracket,
};

inline const char* to_string(SmilesErrorKind kind) {
  switch (kind) {
    case SmilesErrorKind::Syntax: return "syntax error";
    case SmilesErrorKind::UnmatchedRingClosure: return "unmatched ring closure";
    case SmilesErrorKind::UnknownElement: return "unknown element";
    case SmilesErrorKind::RingBondConflict: return "conflicting ring-closure bond orders";
    case SmilesErrorKind::EmptyBracket: return "empty bracket atom";
  }
  return "error";
}

class SmilesError : public ParseError {
 public:
  SmilesError(SmilesErrorKind kind, std::size_t position, const std::string& detail)
      : ParseError(std::string(to_string(kind)) + " at position " + std::to_string(position) +
                       (detail.empty() ? "" : ": " + detail),
                   0, position),
        kind_(kind) {}

  SmilesErrorKind kind() const noexcept { return kind_; }
  std::size_t position() const noexcept { return column(); }

 private:
  SmilesErrorKind kind_;
};

namespace detail {

class SmilesParser {
 public:
  explicit SmilesParser(std::string_view text) : text_(text) {}

  Molecule parse() {
    if (text_.empty()) fail(SmilesErrorKind::Syntax, 0, "empty SMILES");
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == '(') {
        if (prev_ < 0) fail(SmilesErrorKind::Syntax, pos_, "branch without a preceding atom");
        if (pending_) fail(SmilesErrorKind::Syntax, pos_, "bond before branch");
        branches_.push_back(prev_);
        need_atom_ = pos_++;
      } else if (c == ')') {
        if (branches_.empty()) fail(SmilesErrorKind::Syntax, pos_, "unbalanced ')'");
        if (need_atom_) fail(SmilesErrorKind::Syntax, pos_, "branch without an atom");
        if (pending_) fail(SmilesErrorKind::Syntax, pending_->position, "bond without a following atom");
        prev_ = branches_.back();
        branches_.pop_back();
        ++pos_;
      } else if (c == '.') {
        if (prev_ < 0 || pending_) fail(SmilesErrorKind::Syntax, pos_, "misplaced '.'");
        if (!branches_.empty()) fail(SmilesErrorKind::Syntax, pos_, "'.' inside a branch");
        prev_ = -1;
        need_atom_ = pos_++;
      } else if (is_bond_char(c)) {
        if (prev_ < 0) fail(SmilesErrorKind::Syntax, pos_, "bond without a preceding atom");
        if (pending_) fail(SmilesErrorKind::Syntax, pos_, "two consecutive bonds");
        pending_ = PendingBond{bond_order_for(c), pos_};
        ++pos_;
      } else if (std::isdigit(static_cast<unsigned char>(c)) || c == '%') {
        if (need_atom_) fail(SmilesErrorKind::Syntax, pos_, "ring bond without a preceding atom");
        ring_closure();
      } else if (c == '[') {
        add_atom(bracket_atom());
      } else {
        add_atom(organic_atom());
      }
    }
    if (pending_) fail(SmilesErrorKind::Syntax, pending_->position, "bond without a following atom");
    if (need_atom_) fail(SmilesErrorKind::Syntax, *need_atom_, "expected an atom");
    if (!branches_.empty()) fail(SmilesErrorKind::Syntax, text_.size(), "unclosed branch");
    for (const auto& open : rings_) {
      if (open) fail(SmilesErrorKind::UnmatchedRingClosure, open->position, "ring bond never closed");
    }

    Molecule mol(std::move(atoms_), std::move(bonds_), std::string(text_));
    for (int a = 0; a < mol.atom_count(); ++a) {
      if (!mol.atom(a).aromatic) continue;
      bool has_aromatic_bond = false;
      for (const Neighbor& nb : mol.neighbors(a)) {
        has_aromatic_bond |= mol.bond(nb.bond).order == BondOrder::Aromatic;
      }
      if (!has_aromatic_bond) {
        fail(SmilesErrorKind::Syntax, atom_positions_[a], "aromatic atom without an aromatic bond");
      }
    }
    return mol;
  }

 private:
  struct PendingBond {
    std::optional<BondOrder> order;
    std::size_t position;
  };
  struct OpenRing {
    int atom;
    std::optional<BondOrder> order;
    bool explicit_bond;
    std::size_t position;
  };

  [[noreturn]] static void fail(SmilesErrorKind kind, std::size_t pos, const std::string& detail) {
    throw SmilesError(kind, pos, detail);
  }

  static bool is_bond_char(char c) {
    return c == '-' || c == '=' || c == '#' || c == ':' || c == '/' || c == '\\' || c == '$';
  }

  std::optional<BondOrder> bond_order_for(char c) const {
    switch (c) {
      case '-': return BondOrder::Single;
      case '=': return BondOrder::Double;
      case '#': return BondOrder::Triple;
      case ':': return BondOrder::Aromatic;
      case '/': case '\\': return BondOrder::Single;
      default: fail(SmilesErrorKind::Syntax, pos_, "quadruple bonds are not supported");
    }
  }

  BondOrder implicit_order(int a, int b) const {
    return atoms_[a].aromatic && atoms_[b].aromatic ? BondOrder::Aromatic : BondOrder::Single;
  }

  void add_bond(int a, int b, BondOrder order, std::size_t pos) {
    for (const Bond& existing : bonds_) {
      if ((existing.begin == a && existing.end == b) || (existing.begin == b && existing.end == a)) {
        fail(SmilesErrorKind::Syntax, pos, "duplicate bond between the same atoms");
      }
    }
    bonds_.push_back({a, b, order});
  }

  void add_atom(Atom atom) {
    const int index = static_cast<int>(atoms_.size());
    atoms_.push_back(atom);
    need_atom_.reset();
    atom_positions_.push_back(atom_start_);
    if (prev_ >= 0) {
      const BondOrder order =
          pending_ && pending_->order ? *pending_->order : implicit_order(prev_, index);
      add_bond(prev_, index, order, pending_ ? pending_->position : atom_start_);
    }
    pending_.reset();
    prev_ = index;
  }

  Atom organic_atom() {
    atom_start_ = pos_;
    const char c = text_[pos_];
    Atom atom;
    if (std::islower(static_cast<unsigned char>(c))) {
      static constexpr std::array<std::pair<char, int>, 6> kAromatic = {
          {{'b', 5}, {'c', 6}, {'n', 7}, {'o', 8}, {'p', 15}, {'s', 16}}};
      for (auto [ch, z] : kAromatic) {
        if (ch == c) {
          atom.element = z;
          atom.aromatic = true;
          ++pos_;
          return atom;
        }
      }
      fail(SmilesErrorKind::Syntax, pos_, std::string("unexpected character '") + c + "'");
    }
    if (!std::isupper(static_cast<unsigned char>(c))) {
      fail(SmilesErrorKind::Syntax, pos_, std::string("unexpected character '") + c + "'");
    }
    if (c == 'C' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'l') {
      atom.element = 17;
      pos_ += 2;
      return atom;
    }
    if (c == 'B' && pos_ + 1 < text_.size() && text_[pos_ + 1] == 'r') {
      atom.element = 35;
      pos_ += 2;
      return atom;
    }
    const auto z = element_from_symbol(std::string_view(&text_[pos_], 1));
    if (!z || !is_organic_subset(*z)) {
      std::size_t len = 1;
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) len = 2;
      fail(SmilesErrorKind::UnknownElement, pos_,
           "'" + std::string(text_.substr(pos_, len)) + "' needs brackets or is not an element");
    }
    atom.element = *z;
    ++pos_;
    return atom;
  }

  std::optional<int> read_number() {
    if (pos_ >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_]))) return std::nullopt;
    int value = 0;
    while (pos_ < text_.size() && std::isdigit(static_cast<unsigned char>(text_[pos_]))) {
      value = value * 10 + (text_[pos_] - '0');
      if (value > 1000000) fail(SmilesErrorKind::Syntax, pos_, "number too large");
      ++pos_;
    }
    return value;
  }

  Atom bracket_atom() {
    atom_start_ = pos_;
    ++pos_;  // '['
    if (pos_ < text_.size() && text_[pos_] == ']') fail(SmilesErrorKind::EmptyBracket, atom_start_, "");
    Atom atom;
    atom.bracket = true;
    if (auto iso = read_number()) atom.isotope = *iso;

    if (pos_ >= text_.size()) fail(SmilesErrorKind::Syntax, atom_start_, "unterminated bracket atom");
    const char c = text_[pos_];
    if (std::isupper(static_cast<unsigned char>(c))) {
      std::optional<int> z;
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        z = element_from_symbol(text_.substr(pos_, 2));
        if (z) pos_ += 2;
      }
      if (!z) {
        z = element_from_symbol(text_.substr(pos_, 1));
        if (!z) {
          std::size_t len = 1;
          if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) len = 2;
          fail(SmilesErrorKind::UnknownElement, pos_, "'" + std::string(text_.substr(pos_, len)) + "'");
        }
        ++pos_;
      }
      atom.element = *z;
    } else if (std::islower(static_cast<unsigned char>(c))) {
      std::optional<int> z;
      if (pos_ + 1 < text_.size() && std::islower(static_cast<unsigned char>(text_[pos_ + 1]))) {
        std::string two{static_cast<char>(std::toupper(c)), text_[pos_ + 1]};
        z = element_from_symbol(two);
        if (z && may_be_aromatic(*z)) {
          pos_ += 2;
        } else {
          z.reset();
        }
      }
      if (!z) {
        z = element_from_symbol(std::string(1, static_cast<char>(std::toupper(c))));
        if (!z || !may_be_aromatic(*z)) {
          fail(SmilesErrorKind::UnknownElement, pos_, std::string("'") + c + "' is not an aromatic element");
        }
        ++pos_;
      }
      atom.element = *z;
      atom.aromatic = true;
    } else if (c == ']') {
      fail(SmilesErrorKind::EmptyBracket, atom_start_, "no element symbol");
    } else {
      fail(SmilesErrorKind::Syntax, pos_, std::string("expected element symbol, found '") + c + "'");
    }

    // Chirality, parsed and discarded.
    if (pos_ < text_.size() && text_[pos_] == '@') {
      ++pos_;
      if (pos_ < text_.size() && text_[pos_] == '@') {
        ++pos_;
      } else if (pos_ + 1 < text_.size() && std::isupper(static_cast<unsigned char>(text_[pos_])) &&
                 std::isupper(static_cast<unsigned char>(text_[pos_ + 1]))) {
        const auto tag = text_.substr(pos_, 2);
        if (tag != "TH" && tag != "AL" && tag != "SP" && tag != "TB" && tag != "OH") {
          fail(SmilesErrorKind::Syntax, pos_, "unknown chirality class");
        }
        pos_ += 2;
        if (!read_number()) fail(SmilesErrorKind::Syntax, pos_, "chirality class needs a number");
      }
    }
    if (pos_ < text_.size() && text_[pos_] == 'H') {
      ++pos_;
      atom.explicit_h = read_number().value_or(1);
    }
    if (pos_ < text_.size() && (text_[pos_] == '+' || text_[pos_] == '-')) {
      const char sign = text_[pos_];
      const int unit = sign == '+' ? 1 : -1;
      ++pos_;
      if (auto magnitude = read_number()) {
        atom.formal_charge = unit * *magnitude;
      } else {
        int count = 1;
        while (pos_ < text_.size() && text_[pos_] == sign) {
          ++count;
          ++pos_;
        }
        atom.formal_charge = unit * count;
      }
    }
    if (pos_ < text_.size() && text_[pos_] == ':') {
      ++pos_;
      if (!read_number()) fail(SmilesErrorKind::Syntax, pos_, "atom class needs a number");
    }
    if (pos_ >= text_.size() || text_[pos_] != ']') {
      fail(SmilesErrorKind::Syntax, pos_ < text_.size() ? pos_ : text_.size(), "expected ']'");
    }
    ++pos_;
    return atom;
  }

  void ring_closure() {
    const std::size_t start = pos_;
    if (prev_ < 0) fail(SmilesErrorKind::Syntax, pos_, "ring closure without a preceding atom");
    int number = 0;
    if (text_[pos_] == '%') {
      if (pos_ + 2 >= text_.size() || !std::isdigit(static_cast<unsigned char>(text_[pos_ + 1])) ||
          !std::isdigit(static_cast<unsigned char>(text_[pos_ + 2]))) {
        fail(SmilesErrorKind::Syntax, pos_, "'%' must be followed by two digits");
      }
      number = (text_[pos_ + 1] - '0') * 10 + (text_[pos_ + 2] - '0');
      pos_ += 3;
    } else {
      number = text_[pos_] - '0';
      ++pos_;
    }
    const std::optional<BondOrder> written = pending_ ? pending_->order : std::nullopt;
    const bool explicit_bond = pending_.has_value();
    const std::size_t bond_pos = pending_ ? pending_->position : start;
    pending_.reset();

    auto& slot = rings_[static_cast<std::size_t>(number)];
    if (!slot) {
      slot = OpenRing{prev_, written, explicit_bond, start};
      return;
    }
    const OpenRing open = *slot;
    slot.reset();
    if (open.atom == prev_) fail(SmilesErrorKind::Syntax, start, "ring closure to the same atom");
    BondOrder order;
    if (open.explicit_bond && explicit_bond) {
      if (open.order != written) {
        fail(SmilesErrorKind::RingBondConflict, start, "bond orders differ at the two ends");
      }
      order = *written;
    } else if (open.explicit_bond) {
      order = *open.order;
    } else if (explicit_bond) {
      order = *written;
    } else {
      order = implicit_order(open.atom, prev_);
    }
    add_bond(open.atom, prev_, order, bond_pos);
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t atom_start_ = 0;
  int prev_ = -1;
  std::optional<PendingBond> pending_;
  std::vector<int> branches_;
  // Position of the last '(' or '.' until an atom follows it.
  std::optional<std::size_t> need_atom_;
  std::array<std::optional<OpenRing>, 100> rings_{};
  std::vector<Atom> atoms_;
  std::vector<Bond> bonds_;
  std::vector<std::size_t> atom_positions_;
};

}  // namespace detail

// Parses a SMILES string into a molecular graph. Stereo marks are accepted and
// discarded; aromatic flags are taken exactly as written. Surrounding
// whitespace is ignored. Throws SmilesError with a character position.
inline Molecule parse_smiles(std::string_view text) {
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) throw SmilesError(SmilesErrorKind::Syntax, 0, "empty SMILES");
  const auto last = text.find_last_not_of(" \t\r\n");
  return detail::SmilesParser(text.substr(first, last - first + 1)).parse();
}

}  // namespace msbench::mol
