#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lina/fol/ast.hpp"

namespace lina::fol {

// Helpers for formulas restricted to propositional structure: 0-ary
// predicates combined with ¬ ∧ ∨ →. Quantifiers and predicate arguments
// are rejected.

bool is_propositional(const Formula& f);

// Sorted, deduplicated atom names. Throws std::invalid_argument when the
// formula is not propositional.
std::vector<std::string> collect_atoms(const Formula& f);

// Truth table of a propositional formula over an explicit atom ordering.
// Row r assigns atoms[i] = bit i of r; bit r of the table is the formula's
// value in that row.
class PropTable {
 public:
  PropTable(std::size_t atom_count, std::vector<std::uint64_t> words)
      : atom_count_(atom_count), words_(std::move(words)) {}

  std::size_t atom_count() const { return atom_count_; }
  std::size_t rows() const { return std::size_t{1} << atom_count_; }
  bool bit(std::size_t row) const { return (words_[row >> 6] >> (row & 63)) & 1; }

  bool satisfiable() const;
  // Every row satisfying *this also satisfies other.
  bool entails(const PropTable& other) const;
  bool equivalent(const PropTable& other) const;
  // No row satisfies both; the semantic condition on negation edges.
  bool mutually_exclusive(const PropTable& other) const;

 private:
  std::size_t atom_count_;
  std::vector<std::uint64_t> words_;
};

inline constexpr std::size_t kMaxPropTableAtoms = 24;

// Throws std::invalid_argument if f mentions an atom missing from `atoms`
// or if atoms.size() exceeds kMaxPropTableAtoms.
PropTable truth_table(const Formula& f, const std::vector<std::string>& atoms);

}  // namespace lina::fol
