#pragma once

#include <map>
#include <set>
#include <string>
#include <vector>

#include "dycknf/grammar.hpp"
#include "dycknf/pathgraph.hpp"
#include "dycknf/regex.hpp"

namespace dycknf {

struct DependencyGraph {
  Atom root;
  PathGraph graph;  // initial = root, finals = left brackets of terminal pairs
  std::set<int> unreachable_finals;  // terminal-pair left brackets the root cannot reach
};

// root: the axiom or the right bracket of a pair with no terminal side.
DependencyGraph build_dependency_graph(const DyckGrammar &g, const Classification &cls, const Atom &root);

// One regex per (final vertex, path class); each starts with the root symbol.
std::vector<Regex> extract_left_regexes(const DependencyGraph &dg);

// r followed by the reversed image of r that keeps the left brackets of non-left-terminal pairs as
// their right partners.
Regex mirror_extend(const Regex &r, const Classification &cls);

// Mirrored regexes per root (the axiom, then each ]j of a no-terminal pair).
using RegexSets = std::map<Atom, std::vector<Regex>>;
RegexSets build_regex_sets(const DyckGrammar &g, const Classification &cls);

struct ExtendedGraph {
  PathGraph graph;  // one vertex per plain bracket, plus the axiom
  std::map<std::pair<int, int>, std::set<std::string>> edge_items;
  std::map<int, std::set<std::string>> final_items;
  std::set<std::pair<int, int>> mirror_edges;
};

ExtendedGraph build_extended_graph(const DyckGrammar &g, const Classification &cls, const RegexSets &res);

// Image of one graph letter: axiom -> nothing, terminal-pair left bracket -> [i ]i, left-terminal
// pair right bracket -> [i ]i, everything else -> itself (labels and marks dropped).
std::vector<Atom> expand_letter(const Atom &a, const Classification &cls);

// R as a regex: image of all initial -> final paths, plus the words [p ]p of the extra pairs.
Regex regular_language_R(const ExtendedDyckGrammar &g, const ExtendedGraph &eg, std::size_t class_cap = 256);

// Same language as an automaton over bracket atoms (for enumeration).
Nfa language_nfa(const ExtendedDyckGrammar &g, const PathGraph &graph, const Classification &cls,
                 AtomCodec &codec);

std::string dependency_dot(const DependencyGraph &dg, const Classification &cls);
std::string extended_dot(const ExtendedGraph &eg, const Classification &cls);

}  // namespace dycknf
