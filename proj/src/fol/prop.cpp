#include "lina/fol/prop.hpp"

#include <algorithm>
#include <stdexcept>

namespace lina::fol {

bool is_propositional(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::Predicate:
      return f.args().empty();
    case Formula::Kind::Not:
      return is_propositional(f.body());
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      return is_propositional(f.lhs()) && is_propositional(f.rhs());
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return false;
  }
  return false;
}

namespace {

void collect(const Formula& f, std::vector<std::string>& out) {
  switch (f.kind()) {
    case Formula::Kind::Predicate:
      if (!f.args().empty()) throw std::invalid_argument("formula is not propositional: predicate with arguments");
      out.push_back(f.name());
      return;
    case Formula::Kind::Not:
      collect(f.body(), out);
      return;
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies:
      collect(f.lhs(), out);
      collect(f.rhs(), out);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      throw std::invalid_argument("formula is not propositional: quantifier present");
  }
}

bool eval_row(const Formula& f, const std::vector<int>& atom_index, std::size_t row,
              const std::vector<std::string>& atoms) {
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      const auto it = std::lower_bound(atoms.begin(), atoms.end(), f.name());
      if (it == atoms.end() || *it != f.name()) {
        throw std::invalid_argument("atom '" + f.name() + "' is not in the supplied alphabet");
      }
      const std::size_t idx = static_cast<std::size_t>(it - atoms.begin());
      return (row >> idx) & 1;
    }
    case Formula::Kind::Not:
      return !eval_row(f.body(), atom_index, row, atoms);
    case Formula::Kind::And:
      return eval_row(f.lhs(), atom_index, row, atoms) && eval_row(f.rhs(), atom_index, row, atoms);
    case Formula::Kind::Or:
      return eval_row(f.lhs(), atom_index, row, atoms) || eval_row(f.rhs(), atom_index, row, atoms);
    case Formula::Kind::Implies:
      return !eval_row(f.lhs(), atom_index, row, atoms) || eval_row(f.rhs(), atom_index, row, atoms);
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      throw std::invalid_argument("formula is not propositional: quantifier present");
  }
  return false;
}

}  // namespace

std::vector<std::string> collect_atoms(const Formula& f) {
  std::vector<std::string> out;
  collect(f, out);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool PropTable::satisfiable() const {
  for (auto w : words_) {
    if (w != 0) return true;
  }
  return false;
}

bool PropTable::entails(const PropTable& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & ~other.words_[i]) return false;
  }
  return true;
}

bool PropTable::equivalent(const PropTable& other) const {
  return words_ == other.words_;
}

bool PropTable::mutually_exclusive(const PropTable& other) const {
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (words_[i] & other.words_[i]) return false;
  }
  return true;
}

PropTable truth_table(const Formula& f, const std::vector<std::string>& atoms) {
  if (atoms.size() > kMaxPropTableAtoms) {
    throw std::invalid_argument("atom alphabet too large for truth-table evaluation");
  }
  if (!std::is_sorted(atoms.begin(), atoms.end())) {
    throw std::invalid_argument("atom alphabet must be sorted");
  }
  const std::size_t rows = std::size_t{1} << atoms.size();
  std::vector<std::uint64_t> words((rows + 63) / 64, 0);
  std::vector<int> unused;
  for (std::size_t row = 0; row < rows; ++row) {
    if (eval_row(f, unused, row, atoms)) {
      words[row >> 6] |= std::uint64_t{1} << (row & 63);
    }
  }
  // Mask off rows past the end so word comparison is exact.
  if (rows < 64 && !words.empty()) {
    words[0] &= (std::uint64_t{1} << rows) - 1;
  }
  return PropTable(atoms.size(), std::move(words));
}

}  // namespace lina::fol
