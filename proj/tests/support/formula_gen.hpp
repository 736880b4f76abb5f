#pragma once

#include <random>

#include "lina/fol/ast.hpp"

namespace lina::testutil {

// Random closed first-order formula: constants a..d, functions f/g,
// variables bound by enclosing quantifiers, predicates P..W of arity 0-3.
// Closed-ness keeps the parse/render round trip exact, since free
// identifiers always re-parse as constants.
fol::Formula random_formula(std::mt19937_64& rng, int max_depth);

// Random propositional formula over the first `atom_count` names of
// {p, q, r, s, t0, t1, ...}.
fol::Formula random_propositional(std::mt19937_64& rng, int max_depth, int atom_count);

}  // namespace lina::testutil
