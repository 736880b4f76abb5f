#pragma once

#include <iosfwd>
#include <string>

#include "lina/graph/logic_graph.hpp"

namespace lina::graph {

struct GraphParseError : GraphError {
  GraphParseError(std::size_t line, const std::string& what)
      : GraphError("line " + std::to_string(line) + ": " + what), line(line) {}
  std::size_t line;
};

// Line-oriented UTF-8 format:
//   node <id> <formula>
//   equiv <id> <id>
//   entail <id> <id>
//   neg <id> <id>
// Blank lines and lines starting with '#' are ignored.
LogicGraph parse_graph(std::istream& in);
LogicGraph load_graph(const std::string& path);

// Canonical listing: nodes in id order, then equiv/entail/neg edges in
// set order. parse_graph(render_graph(g)) reproduces g.
std::string render_graph(const LogicGraph& g);

}  // namespace lina::graph
