#pragma once

#include <string>
#include <vector>

#include "lina/graph/logic_graph.hpp"

namespace lina::graph {

struct EntailedPairViolation {
  std::string s, t;  // node ids with s ⊨ t whose falsification search found a path
};

// Machine check of the soundness theorem behind falsification search.
// Enumerates every satisfiable, pairwise non-equivalent propositional
// formula over 2 or 3 atoms (one canonical DNF node per truth table),
// builds the semantically closed graph containing every valid entailment
// edge, and asserts for every ordered pair (s, t) with s ⊨ t and s ≠ t
// that falsify_search from s∧t can reach neither ¬s nor ¬t. Returns the
// violating pairs; a sound implementation returns none.
std::vector<EntailedPairViolation> check_theorem1(int atom_count);

// The closed graph the check runs on, exposed for tests and the CLI.
LogicGraph closed_semantic_graph(int atom_count);

}  // namespace lina::graph
