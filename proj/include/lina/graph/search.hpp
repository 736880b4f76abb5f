#pragma once

#include <optional>
#include <set>
#include <string>
#include <vector>

#include "lina/graph/logic_graph.hpp"

namespace lina::graph {

struct SearchStats {
  std::size_t entail_edges_traversed = 0;  // directed edges relaxed, each at most once
  std::size_t nodes_visited = 0;           // nodes dequeued
  std::size_t entail_edges_total = 0;      // |E_t| of the graph the search ran on
};

struct SearchResult {
  enum class Outcome { PathFound, NoPath };
  Outcome outcome = Outcome::NoPath;
  std::vector<std::string> path;  // present iff PathFound; successive nodes share a black edge
  SearchStats stats;

  bool found() const { return outcome == Outcome::PathFound; }
};

// The concrete search problem a falsification or verification query runs
// on. Falsification may augment the graph with a synthesized start node,
// so the instance carries the effective graph.
struct SearchInstance {
  LogicGraph graph;
  std::string start;
  std::set<std::string> targets;
  bool start_synthesized = false;
};

// Builds the falsification instance for hypothesis node q and option node
// a: the start is an existing node equivalent to q∧a (smallest id wins) or
// a synthesized node with that label plus its truth-table-forced
// entailment edges; targets are negation-edge partners of q or a and nodes
// whose label is equivalent to ¬q or ¬a. Throws GraphInputError when q or
// a is missing.
SearchInstance falsification_instance(const LogicGraph& g, const std::string& q, const std::string& a);

// Verification instance: start at q, reach a (or any node equivalent to a).
SearchInstance verification_instance(const LogicGraph& g, const std::string& q, const std::string& a);

// Deterministic breadth-first reachability over entailment edges (forward
// only) and equivalence edges (both directions), expanding neighbors in
// id order and stopping at the first target within step_limit hops.
// Negation edges are never traversed; they only locate targets.
SearchResult run_search(const SearchInstance& instance, std::size_t step_limit);

SearchResult falsify_search(const LogicGraph& g, const std::string& q, const std::string& a,
                            std::size_t step_limit);

SearchResult verify_search(const LogicGraph& g, const std::string& q, const std::string& a,
                           std::size_t step_limit);

}  // namespace lina::graph
