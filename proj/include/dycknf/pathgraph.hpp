#pragma once

#include <functional>
#include <set>
#include <string>
#include <vector>

#include "dycknf/automaton.hpp"
#include "dycknf/regex.hpp"

namespace dycknf {

// Vertex-labeled digraph; a path reads the labels of every vertex it visits, endpoints included.
struct PathGraph {
  std::vector<Atom> labels;
  std::vector<std::set<int>> succ;
  int initial = -1;
  std::set<int> finals;

  int add_vertex(const Atom &a);
  void add_edge(int u, int v);
  int vertices() const { return static_cast<int>(labels.size()); }
  int find(const Atom &a) const;  // -1 when absent
  std::set<int> reachable(int from) const;

  // Regexes describing all paths src -> dst, one per class of the loop-nesting decomposition.
  // Falls back to a single state-elimination regex once `class_cap` classes are exceeded.
  std::vector<Regex> path_regexes(int src, int dst, std::size_t class_cap = 256) const;

  // Automaton reading expand(label) for each visited vertex, from `initial` to any final.
  Nfa to_nfa(AtomCodec &codec, const std::function<std::vector<Atom>(const Atom &)> &expand) const;
};

// Regex for paths src -> dst by eliminating vertices in the given order.
Regex eliminate_paths(const PathGraph &g, int src, int dst);

}  // namespace dycknf
