#include "lina/graph/graph_io.hpp"

#include <fstream>
#include <sstream>

#include "lina/fol/parser.hpp"

namespace lina::graph {

LogicGraph parse_graph(std::istream& in) {
  LogicGraph g;
  std::string line;
  std::size_t line_no = 0;
  // Edges are collected first so nodes may be declared in any order.
  std::vector<std::tuple<std::size_t, std::string, std::string, std::string>> edges;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    std::istringstream ls(line);
    std::string keyword;
    if (!(ls >> keyword) || keyword[0] == '#') continue;
    if (keyword == "node") {
      std::string id;
      if (!(ls >> id)) throw GraphParseError(line_no, "node requires an id");
      std::string formula_text;
      std::getline(ls, formula_text);
      const auto parsed = fol::parse_formula(formula_text);
      if (!parsed.ok()) {
        throw GraphParseError(line_no, "bad label formula: " + parsed.error().message());
      }
      try {
        g.add_node(id, parsed.formula());
      } catch (const GraphInputError& e) {
        throw GraphParseError(line_no, e.what());
      }
    } else if (keyword == "equiv" || keyword == "entail" || keyword == "neg") {
      std::string a, b, extra;
      if (!(ls >> a >> b) || (ls >> extra)) {
        throw GraphParseError(line_no, keyword + " requires exactly two node ids");
      }
      edges.emplace_back(line_no, keyword, a, b);
    } else {
      throw GraphParseError(line_no, "unknown directive '" + keyword + "'");
    }
  }
  for (const auto& [no, kind, a, b] : edges) {
    try {
      if (kind == "equiv") {
        g.add_equiv(a, b);
      } else if (kind == "entail") {
        g.add_entail(a, b);
      } else {
        g.add_neg(a, b);
      }
    } catch (const GraphInputError& e) {
      throw GraphParseError(no, e.what());
    }
  }
  return g;
}

LogicGraph load_graph(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw GraphError("cannot open graph file: " + path);
  return parse_graph(in);
}

std::string render_graph(const LogicGraph& g) {
  std::ostringstream out;
  for (const auto& id : g.node_ids()) {
    out << "node " << id << ' ' << fol::render_formula(g.label(id)) << '\n';
  }
  for (const auto& [a, b] : g.equiv_edges()) out << "equiv " << a << ' ' << b << '\n';
  for (const auto& [u, v] : g.entail_edges()) out << "entail " << u << ' ' << v << '\n';
  for (const auto& [a, b] : g.neg_edges()) out << "neg " << a << ' ' << b << '\n';
  return out.str();
}

}  // namespace lina::graph
