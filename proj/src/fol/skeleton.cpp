#include "lina/fol/skeleton.hpp"

#include <cstdint>
#include <map>
#include <stdexcept>

namespace lina::fol {

const char* to_string(Entailment e) {
  switch (e) {
    case Entailment::Entailed: return "Entailed";
    case Entailment::Contradicted: return "Contradicted";
    case Entailment::Unknown: return "Unknown";
  }
  return "?";
}

namespace {

struct LetterTable {
  // Canonical rendering keys structural identity: render is injective up
  // to structural equality, so equal subformulas share a letter.
  std::map<std::string, std::size_t> index;
  std::vector<Formula> atoms;

  Formula letter_for(const Formula& f) {
    const std::string key = render_formula(f);
    auto it = index.find(key);
    std::size_t i;
    if (it != index.end()) {
      i = it->second;
    } else {
      i = atoms.size();
      index.emplace(key, i);
      atoms.push_back(f);
    }
    return Formula::predicate("p" + std::to_string(i));
  }
};

Formula letterize(const Formula& f, LetterTable& table) {
  switch (f.kind()) {
    case Formula::Kind::Predicate:
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      return table.letter_for(f);
    case Formula::Kind::Not:
      return Formula::negation(letterize(f.body(), table));
    case Formula::Kind::And:
    case Formula::Kind::Or:
    case Formula::Kind::Implies: {
      // Sequenced left then right; argument evaluation order would not
      // guarantee first-appearance letter numbering.
      Formula lhs = letterize(f.lhs(), table);
      Formula rhs = letterize(f.rhs(), table);
      if (f.kind() == Formula::Kind::And) return Formula::conjunction(std::move(lhs), std::move(rhs));
      if (f.kind() == Formula::Kind::Or) return Formula::disjunction(std::move(lhs), std::move(rhs));
      return Formula::implication(std::move(lhs), std::move(rhs));
    }
  }
  throw std::logic_error("unreachable formula kind");
}

// Flat postfix program so the truth-table loop avoids pointer chasing.
struct Program {
  enum class Op : std::uint8_t { Push, Not, And, Or, Implies };
  std::vector<std::pair<Op, std::uint32_t>> code;

  bool eval(std::uint32_t assignment, std::vector<unsigned char>& stack) const {
    stack.clear();
    for (const auto& [op, arg] : code) {
      switch (op) {
        case Op::Push:
          stack.push_back((assignment >> arg) & 1);
          break;
        case Op::Not:
          stack.back() = !stack.back();
          break;
        case Op::And: {
          const bool b = stack.back();
          stack.pop_back();
          stack.back() = stack.back() && b;
          break;
        }
        case Op::Or: {
          const bool b = stack.back();
          stack.pop_back();
          stack.back() = stack.back() || b;
          break;
        }
        case Op::Implies: {
          const bool b = stack.back();
          stack.pop_back();
          stack.back() = !stack.back() || b;
          break;
        }
      }
    }
    return stack.back();
  }
};

void compile(const Formula& f, Program& prog) {
  switch (f.kind()) {
    case Formula::Kind::Predicate: {
      // Letter formulas use atoms p<i>; recover the index from the name.
      const std::uint32_t idx = static_cast<std::uint32_t>(std::stoul(f.name().substr(1)));
      prog.code.emplace_back(Program::Op::Push, idx);
      return;
    }
    case Formula::Kind::Not:
      compile(f.body(), prog);
      prog.code.emplace_back(Program::Op::Not, 0);
      return;
    case Formula::Kind::And:
      compile(f.lhs(), prog);
      compile(f.rhs(), prog);
      prog.code.emplace_back(Program::Op::And, 0);
      return;
    case Formula::Kind::Or:
      compile(f.lhs(), prog);
      compile(f.rhs(), prog);
      prog.code.emplace_back(Program::Op::Or, 0);
      return;
    case Formula::Kind::Implies:
      compile(f.lhs(), prog);
      compile(f.rhs(), prog);
      prog.code.emplace_back(Program::Op::Implies, 0);
      return;
    case Formula::Kind::Forall:
    case Formula::Kind::Exists:
      throw std::logic_error("quantifier survived skeletonization");
  }
}

}  // namespace

Skeleton propositional_skeleton(const std::vector<Formula>& formulas) {
  LetterTable table;
  Skeleton out;
  out.letters.reserve(formulas.size());
  for (const auto& f : formulas) {
    out.letters.push_back(letterize(f, table));
  }
  out.atoms = std::move(table.atoms);
  return out;
}

Entailment entails(const std::vector<Formula>& premises, const Formula& goal) {
  std::vector<Formula> all = premises;
  all.push_back(goal);
  const Skeleton sk = propositional_skeleton(all);
  const std::size_t n = sk.atoms.size();
  if (n > kMaxEntailmentAtoms) return Entailment::Unknown;

  std::vector<Program> programs(sk.letters.size());
  for (std::size_t i = 0; i < sk.letters.size(); ++i) {
    compile(sk.letters[i], programs[i]);
  }

  std::size_t goal_sat = 0;    // models of premises where goal holds
  std::size_t goal_unsat = 0;  // models of premises where goal fails
  std::vector<unsigned char> stack;
  const std::uint64_t rows = std::uint64_t{1} << n;
  for (std::uint64_t row = 0; row < rows; ++row) {
    const auto assignment = static_cast<std::uint32_t>(row);
    bool premises_hold = true;
    for (std::size_t i = 0; i + 1 < programs.size(); ++i) {
      if (!programs[i].eval(assignment, stack)) {
        premises_hold = false;
        break;
      }
    }
    if (!premises_hold) continue;
    if (programs.back().eval(assignment, stack)) {
      ++goal_sat;
    } else {
      ++goal_unsat;
    }
  }

  if (goal_sat == 0) return Entailment::Contradicted;
  if (goal_unsat == 0) return Entailment::Entailed;
  return Entailment::Unknown;
}

}  // namespace lina::fol
