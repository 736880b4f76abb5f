#include "lina/graph/search.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "lina/fol/prop.hpp"

namespace lina::graph {

namespace {

// Truth tables for every label over the full graph alphabet, so pairwise
// comparisons are direct word comparisons.
std::map<std::string, fol::PropTable> node_tables(const LogicGraph& g, const std::vector<std::string>& atoms) {
  std::map<std::string, fol::PropTable> out;
  for (const auto& id : g.node_ids()) {
    out.emplace(id, fol::truth_table(g.label(id), atoms));
  }
  return out;
}

std::string fresh_id(const LogicGraph& g, const std::string& base) {
  std::string id = base;
  int suffix = 1;
  while (g.has_node(id)) {
    id = base + std::to_string(suffix++);
  }
  return id;
}

}  // namespace

SearchInstance falsification_instance(const LogicGraph& g, const std::string& q, const std::string& a) {
  const fol::Formula qa = fol::Formula::conjunction(g.label(q), g.label(a));
  const fol::Formula not_q = fol::negate(g.label(q));
  const fol::Formula not_a = fol::negate(g.label(a));

  auto atoms = g.atom_alphabet();
  if (atoms.size() > kMaxGraphAtoms) {
    throw CapacityError("graph atom alphabet exceeds " + std::to_string(kMaxGraphAtoms) + " atoms");
  }
  const auto tables = node_tables(g, atoms);
  const auto qa_table = fol::truth_table(qa, atoms);
  const auto not_q_table = fol::truth_table(not_q, atoms);
  const auto not_a_table = fol::truth_table(not_a, atoms);

  SearchInstance inst;
  inst.graph = g;

  // Existing node equivalent to q∧a, smallest id first.
  for (const auto& id : g.node_ids()) {
    if (tables.at(id).equivalent(qa_table)) {
      inst.start = id;
      break;
    }
  }
  if (inst.start.empty()) {
    const std::string sid = fresh_id(g, "__hypothesis__");
    inst.graph.add_node(sid, qa);
    for (const auto& id : g.node_ids()) {
      if (qa_table.entails(tables.at(id))) {
        inst.graph.add_entail(sid, id);
      }
    }
    inst.start = sid;
    inst.start_synthesized = true;
  }

  // Targets: negation-edge partners of q or a, or label-level negations.
  // A negation edge is a certificate of mutual exclusion, so reaching the
  // partner contradicts the assumed proposition.
  for (const auto& [x, y] : g.neg_edges()) {
    if (x == q || x == a) inst.targets.insert(y);
    if (y == q || y == a) inst.targets.insert(x);
  }
  for (const auto& id : g.node_ids()) {
    if (tables.at(id).equivalent(not_q_table) || tables.at(id).equivalent(not_a_table)) {
      inst.targets.insert(id);
    }
  }
  return inst;
}

SearchInstance verification_instance(const LogicGraph& g, const std::string& q, const std::string& a) {
  auto atoms = g.atom_alphabet();
  if (atoms.size() > kMaxGraphAtoms) {
    throw CapacityError("graph atom alphabet exceeds " + std::to_string(kMaxGraphAtoms) + " atoms");
  }
  const auto tables = node_tables(g, atoms);
  const auto a_table = fol::truth_table(g.label(a), atoms);
  g.label(q);  // existence check

  SearchInstance inst;
  inst.graph = g;
  inst.start = q;
  inst.targets.insert(a);
  for (const auto& id : g.node_ids()) {
    if (tables.at(id).equivalent(a_table)) inst.targets.insert(id);
  }
  return inst;
}

SearchResult run_search(const SearchInstance& instance, std::size_t step_limit) {
  const LogicGraph& g = instance.graph;
  SearchResult result;
  result.stats.entail_edges_total = g.entail_edges().size();
  if (instance.targets.empty()) {
    return result;  // nothing to reach, nothing traversed
  }

  // Neighbor lists in id order make discovery order, and therefore the
  // returned path, deterministic.
  std::map<std::string, std::vector<std::pair<std::string, bool>>> adjacency;  // (neighbor, via entailment)
  for (const auto& [u, v] : g.entail_edges()) {
    adjacency[u].emplace_back(v, true);
  }
  for (const auto& [x, y] : g.equiv_edges()) {
    adjacency[x].emplace_back(y, false);
    adjacency[y].emplace_back(x, false);
  }
  for (auto& [_, neighbors] : adjacency) {
    std::sort(neighbors.begin(), neighbors.end());
  }

  std::map<std::string, std::string> parent;
  std::map<std::string, std::size_t> depth;
  std::deque<std::string> queue;

  auto emit_path = [&](const std::string& target) {
    std::vector<std::string> path;
    for (std::string id = target;; id = parent.at(id)) {
      path.push_back(id);
      if (id == instance.start) break;
    }
    std::reverse(path.begin(), path.end());
    result.outcome = SearchResult::Outcome::PathFound;
    result.path = std::move(path);
  };

  depth[instance.start] = 0;
  if (instance.targets.count(instance.start)) {
    emit_path(instance.start);
    return result;
  }
  queue.push_back(instance.start);

  while (!queue.empty()) {
    const std::string u = queue.front();
    queue.pop_front();
    ++result.stats.nodes_visited;
    const std::size_t d = depth.at(u);
    if (d == step_limit) continue;
    const auto it = adjacency.find(u);
    if (it == adjacency.end()) continue;
    for (const auto& [v, via_entail] : it->second) {
      if (via_entail) ++result.stats.entail_edges_traversed;
      if (depth.count(v)) continue;
      depth[v] = d + 1;
      parent[v] = u;
      if (instance.targets.count(v)) {
        emit_path(v);
        return result;
      }
      queue.push_back(v);
    }
  }
  return result;
}

SearchResult falsify_search(const LogicGraph& g, const std::string& q, const std::string& a,
                            std::size_t step_limit) {
  return run_search(falsification_instance(g, q, a), step_limit);
}

SearchResult verify_search(const LogicGraph& g, const std::string& q, const std::string& a,
                           std::size_t step_limit) {
  return run_search(verification_instance(g, q, a), step_limit);
}

}  // namespace lina::graph
