#include "lina/graph/logic_graph.hpp"

#include <algorithm>

#include "lina/fol/prop.hpp"

namespace lina::graph {

void LogicGraph::add_node(const std::string& id, fol::Formula label) {
  if (id.empty() || id.find_first_of(" \t\r\n") != std::string::npos) {
    throw GraphInputError("node id must be non-empty and contain no whitespace: '" + id + "'");
  }
  if (nodes_.count(id)) {
    throw GraphInputError("duplicate node id: '" + id + "'");
  }
  if (!fol::is_propositional(label)) {
    throw GraphInputError("node '" + id + "' label is not propositional");
  }
  nodes_.emplace(id, std::move(label));
}

void LogicGraph::add_equiv(const std::string& a, const std::string& b) {
  require_node(a);
  require_node(b);
  if (a == b) throw GraphInputError("self-loop on node '" + a + "'");
  equiv_.insert(normalized(a, b));
}

void LogicGraph::add_entail(const std::string& from, const std::string& to) {
  require_node(from);
  require_node(to);
  if (from == to) throw GraphInputError("self-loop on node '" + from + "'");
  entail_.insert({from, to});
}

void LogicGraph::add_neg(const std::string& a, const std::string& b) {
  require_node(a);
  require_node(b);
  if (a == b) throw GraphInputError("self-loop on node '" + a + "'");
  neg_.insert(normalized(a, b));
}

const fol::Formula& LogicGraph::label(const std::string& id) const {
  const auto it = nodes_.find(id);
  if (it == nodes_.end()) throw GraphInputError("unknown node id: '" + id + "'");
  return it->second;
}

std::vector<std::string> LogicGraph::node_ids() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& [id, _] : nodes_) out.push_back(id);
  return out;
}

std::vector<std::string> LogicGraph::atom_alphabet() const {
  std::vector<std::string> out;
  for (const auto& [_, label] : nodes_) {
    const auto atoms = fol::collect_atoms(label);
    out.insert(out.end(), atoms.begin(), atoms.end());
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

bool LogicGraph::ids_equal(const LogicGraph& other) const {
  if (nodes_.size() != other.nodes_.size()) return false;
  auto it = nodes_.begin();
  auto jt = other.nodes_.begin();
  for (; it != nodes_.end(); ++it, ++jt) {
    if (it->first != jt->first || !(it->second == jt->second)) return false;
  }
  return true;
}

void LogicGraph::require_node(const std::string& id) const {
  if (!nodes_.count(id)) throw GraphInputError("unknown node id: '" + id + "'");
}

namespace {

// Union alphabet of the two labels; edge conditions are insensitive to
// atoms outside either label.
std::vector<std::string> pair_alphabet(const fol::Formula& a, const fol::Formula& b) {
  auto atoms = fol::collect_atoms(a);
  const auto more = fol::collect_atoms(b);
  atoms.insert(atoms.end(), more.begin(), more.end());
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

}  // namespace

std::vector<EdgeViolation> validate_graph(const LogicGraph& g) {
  if (g.atom_alphabet().size() > kMaxGraphAtoms) {
    throw CapacityError("graph atom alphabet exceeds " + std::to_string(kMaxGraphAtoms) + " atoms");
  }
  std::vector<EdgeViolation> out;
  for (const auto& [a, b] : g.equiv_edges()) {
    const auto atoms = pair_alphabet(g.label(a), g.label(b));
    if (!fol::truth_table(g.label(a), atoms).equivalent(fol::truth_table(g.label(b), atoms))) {
      out.push_back({EdgeViolation::EdgeKind::Equiv, a, b, "labels are not logically equivalent"});
    }
  }
  for (const auto& [u, v] : g.entail_edges()) {
    const auto atoms = pair_alphabet(g.label(u), g.label(v));
    if (!fol::truth_table(g.label(u), atoms).entails(fol::truth_table(g.label(v), atoms))) {
      out.push_back({EdgeViolation::EdgeKind::Entail, u, v, "source label does not entail target label"});
    }
  }
  for (const auto& [a, b] : g.neg_edges()) {
    const auto atoms = pair_alphabet(g.label(a), g.label(b));
    if (!fol::truth_table(g.label(a), atoms).mutually_exclusive(fol::truth_table(g.label(b), atoms))) {
      out.push_back({EdgeViolation::EdgeKind::Neg, a, b, "labels are not mutually exclusive"});
    }
  }
  return out;
}

LogicGraph contract_equivalence(const LogicGraph& g) {
  // Union-find keyed by id; the representative is the smallest id in the
  // component, which keeps contraction deterministic and idempotent.
  std::map<std::string, std::string> parent;
  for (const auto& id : g.node_ids()) parent[id] = id;

  auto find = [&parent](std::string id) {
    while (parent[id] != id) {
      parent[id] = parent[parent[id]];
      id = parent[id];
    }
    return id;
  };
  auto unite = [&](const std::string& a, const std::string& b) {
    std::string ra = find(a), rb = find(b);
    if (ra == rb) return;
    if (rb < ra) std::swap(ra, rb);
    parent[rb] = ra;
  };

  for (const auto& [a, b] : g.equiv_edges()) unite(a, b);

  LogicGraph out;
  for (const auto& id : g.node_ids()) {
    if (find(id) == id) out.add_node(id, g.label(id));
  }
  for (const auto& [u, v] : g.entail_edges()) {
    const std::string ru = find(u), rv = find(v);
    if (ru != rv) out.add_entail(ru, rv);
  }
  for (const auto& [a, b] : g.neg_edges()) {
    const std::string ra = find(a), rb = find(b);
    if (ra != rb) out.add_neg(ra, rb);
  }
  return out;
}

}  // namespace lina::graph
