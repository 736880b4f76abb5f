#pragma once

#include <random>

#include "lina/fol/skeleton.hpp"
#include "lina/graph/search.hpp"

namespace lina::testutil {

// Independent entailment oracle: enumerates assignments over the atomic
// subformulas directly (no skeleton letters, no compiled programs) and
// applies the same decision rule as fol::entails.
fol::Entailment brute_force_entails(const std::vector<fol::Formula>& premises, const fol::Formula& goal);

// Independent reachability oracle: exhaustive depth-first enumeration of
// simple black-edge paths from the instance start, succeeding if any
// target is reached within step_limit hops.
bool exhaustive_path_exists(const graph::SearchInstance& instance, std::size_t step_limit);

// Random graph whose edges are added only where the semantic condition
// already holds, so validate_graph accepts it by construction.
graph::LogicGraph random_valid_graph(std::mt19937_64& rng, std::size_t max_nodes, int atom_count);

}  // namespace lina::testutil
