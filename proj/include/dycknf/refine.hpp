#pragma once

#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "dycknf/depgraph.hpp"

namespace dycknf {

// Forks every star into "absent" and a plus loop; the union of the results has r's language.
// Order is deterministic: plus variants come before the variants that drop the loop.
std::vector<Regex> plus_expand(const Regex &r);

// Mirrored plus-only regexes per root (axiom first, then ]j ascending).
RegexSets plus_regex_sets(const DyckGrammar &g, const Classification &cls);

// One labeled regex with its position graph.
struct Template {
  Atom root;           // S or ]j, unlabeled
  int q = 0;
  Regex regex = Regex::eps();  // every non-root letter carries q and an occurrence mark
  Glushkov gl;
  bool terminal = false;     // no last letter is a right bracket of a no-terminal pair
  std::vector<int> sites;    // non-root positions holding such right brackets
};

struct TemplateSet {
  std::vector<Template> templates;           // q = index + 1
  std::map<Atom, std::vector<int>> family;   // root -> template indices
  int c0 = 0;
};

TemplateSet label_templates(const RegexSets &plus_sets, const Classification &cls);

struct RefineOptions {
  bool loop_copies = true;  // fresh copies of leaf templates when a recursive family is entered from outside
  bool pop_copies = true;   // separate labels for everything reached from a pop vertex
  std::optional<std::size_t> max_connections;  // default: templates * max(1, no-terminal pairs) * 64
};

class RefineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RefinedGraph {
  enum class EdgeKind { Internal, Link, Glue };
  struct Instance {
    int tpl = 0;
    int q = 0;
    std::string origin;
  };

  PathGraph graph;  // labels carry q and marks
  std::map<std::pair<int, int>, EdgeKind> edge_kind;
  std::set<int> sites;  // right brackets of no-terminal pairs (connection points)
  std::set<int> cores;
  std::vector<Instance> instances;
  std::vector<std::string> log;
  std::size_t connections = 0;
};

// Assembles the refined graph from the axiom templates, connecting templates at every site until
// nothing changes. Throws RefineError when the connection cap trips.
RefinedGraph build_refined_graph(const DyckGrammar &g, const Classification &cls, const TemplateSet &ts,
                                 const RefineOptions &opt = {});

// Sites left without an outgoing edge (dummy or pop vertices); empty on a completed graph.
std::vector<int> open_sites(const RefinedGraph &rg);
// Occurrences of no-terminal right brackets outside the allowed neighbour contexts.
std::vector<std::string> context_violations(const RefinedGraph &rg, const Classification &cls);

// Image of all initial -> final paths plus the extra-pair words.
Regex regular_language_Rm(const ExtendedDyckGrammar &g, const RefinedGraph &rg, std::size_t class_cap = 256);

std::string refined_dot(const RefinedGraph &rg, const Classification &cls);

// Everything from a Dyck grammar up to the refined graph.
struct Refinement {
  Classification cls;
  RegexSets plus_sets;
  TemplateSet templates;
  RefinedGraph graph;
};
Refinement refine(const DyckGrammar &g, const RefineOptions &opt = {});

}  // namespace dycknf
