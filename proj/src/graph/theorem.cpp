#include "lina/graph/theorem.hpp"

#include <cstdint>
#include <stdexcept>
#include <thread>

#include "lina/fol/prop.hpp"
#include "lina/graph/search.hpp"

namespace lina::graph {

namespace {

const std::vector<std::string>& alphabet(int atom_count) {
  static const std::vector<std::string> two = {"p", "q"};
  static const std::vector<std::string> three = {"p", "q", "r"};
  if (atom_count == 2) return two;
  if (atom_count == 3) return three;
  throw std::invalid_argument("atom_count must be 2 or 3");
}

// Canonical DNF for a truth-table mask: one minterm per satisfied row,
// OR-chained left associatively. Row bits follow truth_table()'s
// convention (atom i = bit i of the row index).
fol::Formula dnf_for_mask(std::uint32_t mask, const std::vector<std::string>& atoms) {
  const std::size_t rows = std::size_t{1} << atoms.size();
  std::vector<fol::Formula> minterms;
  for (std::size_t row = 0; row < rows; ++row) {
    if (!((mask >> row) & 1)) continue;
    std::vector<fol::Formula> literals;
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      fol::Formula atom = fol::Formula::predicate(atoms[i]);
      literals.push_back((row >> i) & 1 ? atom : fol::Formula::negation(atom));
    }
    fol::Formula term = literals[0];
    for (std::size_t i = 1; i < literals.size(); ++i) {
      term = fol::Formula::conjunction(term, literals[i]);
    }
    minterms.push_back(term);
  }
  fol::Formula out = minterms[0];
  for (std::size_t i = 1; i < minterms.size(); ++i) {
    out = fol::Formula::disjunction(out, minterms[i]);
  }
  return out;
}

std::string node_id(std::uint32_t mask) {
  char buf[8];
  std::snprintf(buf, sizeof buf, "f%03u", mask);
  return buf;
}

}  // namespace

LogicGraph closed_semantic_graph(int atom_count) {
  const auto& atoms = alphabet(atom_count);
  const std::uint32_t table_count = 1u << (1u << atoms.size());

  LogicGraph g;
  for (std::uint32_t mask = 1; mask < table_count; ++mask) {  // mask 0 is unsatisfiable
    g.add_node(node_id(mask), dnf_for_mask(mask, atoms));
  }
  for (std::uint32_t u = 1; u < table_count; ++u) {
    for (std::uint32_t v = 1; v < table_count; ++v) {
      if (u != v && (u & ~v) == 0) {  // models of u ⊆ models of v
        g.add_entail(node_id(u), node_id(v));
      }
    }
  }
  return g;
}

std::vector<EntailedPairViolation> check_theorem1(int atom_count) {
  const auto& atoms = alphabet(atom_count);
  const std::uint32_t table_count = 1u << (1u << atoms.size());
  const LogicGraph g = closed_semantic_graph(atom_count);
  const std::size_t step_limit = g.node_count() + 1;

  // Entailed ordered pairs, partitioned across workers. Searches only read
  // the shared graph.
  std::vector<std::pair<std::uint32_t, std::uint32_t>> pairs;
  for (std::uint32_t s = 1; s < table_count; ++s) {
    for (std::uint32_t t = 1; t < table_count; ++t) {
      if (s != t && (s & ~t) == 0) pairs.emplace_back(s, t);
    }
  }

  const std::size_t worker_count = std::min<std::size_t>(std::max(1u, std::thread::hardware_concurrency()), 8);
  std::vector<std::vector<EntailedPairViolation>> found(worker_count);
  std::vector<std::thread> workers;
  for (std::size_t w = 0; w < worker_count; ++w) {
    workers.emplace_back([&, w] {
      for (std::size_t i = w; i < pairs.size(); i += worker_count) {
        const auto [s, t] = pairs[i];
        const SearchResult res = falsify_search(g, node_id(s), node_id(t), step_limit);
        if (res.found()) {
          found[w].push_back({node_id(s), node_id(t)});
        }
      }
    });
  }
  for (auto& th : workers) th.join();

  std::vector<EntailedPairViolation> out;
  for (const auto& part : found) out.insert(out.end(), part.begin(), part.end());
  return out;
}

}  // namespace lina::graph
