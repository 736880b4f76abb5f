#pragma once

#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lina/fol/ast.hpp"

namespace lina::graph {

struct GraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Raised when the combined atom alphabet exceeds the truth-table budget.
struct CapacityError : GraphError {
  using GraphError::GraphError;
};

// Raised on missing nodes, duplicate ids, self-loops, or non-propositional
// labels.
struct GraphInputError : GraphError {
  using GraphError::GraphError;
};

using EdgePair = std::pair<std::string, std::string>;

// Proposition graph: nodes labeled with propositional formulas, undirected
// equivalence edges, directed entailment edges, and undirected negation
// (mutual-exclusion) edges. Node ids are ordered, which fixes traversal
// and tie-break order everywhere.
class LogicGraph {
 public:
  void add_node(const std::string& id, fol::Formula label);
  void add_equiv(const std::string& a, const std::string& b);
  void add_entail(const std::string& from, const std::string& to);
  void add_neg(const std::string& a, const std::string& b);

  bool has_node(const std::string& id) const { return nodes_.count(id) != 0; }
  const fol::Formula& label(const std::string& id) const;
  std::size_t node_count() const { return nodes_.size(); }
  std::vector<std::string> node_ids() const;

  // Undirected sets store pairs with first < second.
  const std::set<EdgePair>& equiv_edges() const { return equiv_; }
  const std::set<EdgePair>& entail_edges() const { return entail_; }
  const std::set<EdgePair>& neg_edges() const { return neg_; }

  // Sorted union of every label's atoms.
  std::vector<std::string> atom_alphabet() const;

  bool operator==(const LogicGraph& other) const {
    return ids_equal(other) && equiv_ == other.equiv_ && entail_ == other.entail_ && neg_ == other.neg_;
  }

 private:
  bool ids_equal(const LogicGraph& other) const;
  void require_node(const std::string& id) const;
  static EdgePair normalized(const std::string& a, const std::string& b) {
    return a < b ? EdgePair{a, b} : EdgePair{b, a};
  }

  std::map<std::string, fol::Formula> nodes_;
  std::set<EdgePair> equiv_, entail_, neg_;
};

struct EdgeViolation {
  enum class EdgeKind { Equiv, Entail, Neg };
  EdgeKind kind;
  std::string a, b;
  std::string reason;
};

// Truth-table checks every edge's semantic condition: equivalence edges
// join equivalent labels, an entailment edge (u,v) requires u ⊨ v, and a
// negation edge requires the labels to be mutually exclusive. Throws
// CapacityError when the graph alphabet exceeds 16 atoms.
std::vector<EdgeViolation> validate_graph(const LogicGraph& g);

inline constexpr std::size_t kMaxGraphAtoms = 16;

// Collapses every equivalence-connected component into its
// lexicographically smallest node; entailment and negation edges are
// re-targeted to representatives with duplicates and self-loops dropped.
LogicGraph contract_equivalence(const LogicGraph& g);

}  // namespace lina::graph
