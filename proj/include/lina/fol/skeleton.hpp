#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "lina/fol/ast.hpp"

namespace lina::fol {

// Propositional abstraction of a formula list. Ground atoms and whole
// quantified subformulas become opaque letters p0, p1, ... numbered in
// first-appearance order; identical subformulas share a letter across the
// whole list.
struct Skeleton {
  std::vector<Formula> atoms;    // letter i ↦ the abstracted subformula
  std::vector<Formula> letters;  // inputs rebuilt over 0-ary predicates p0..
};

Skeleton propositional_skeleton(const std::vector<Formula>& formulas);

enum class Entailment { Entailed, Contradicted, Unknown };

const char* to_string(Entailment e);

// Truth-table check over the propositional skeleton. Returns Entailed when
// every model of the premises satisfies the goal and at least one model
// satisfies it, Contradicted when premises plus goal are jointly
// unsatisfiable (inconsistent premises therefore report Contradicted), and
// Unknown otherwise or when the skeleton has more than kMaxEntailmentAtoms
// distinct atoms. Sound but deliberately incomplete for quantified
// formulas, which are abstracted to opaque letters.
inline constexpr std::size_t kMaxEntailmentAtoms = 20;

Entailment entails(const std::vector<Formula>& premises, const Formula& goal);

}  // namespace lina::fol
