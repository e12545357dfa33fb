#pragma once

#include <optional>
#include <string>

#include "dycknf/approx.hpp"
#include "dycknf/depgraph.hpp"
#include "dycknf/grammar.hpp"
#include "dycknf/oracle.hpp"
#include "dycknf/refine.hpp"

namespace dycknf {

// Dyck form of an input grammar: bracket-named grammars already in normal form are read as is,
// anything else goes through CNF and the conversion.
struct DyckInput {
  Cfg input;
  std::optional<DyckConversion> conversion;
  DyckGrammar grammar;
};
DyckInput to_dyck_input(const Cfg &g);

struct Pipeline {
  DyckInput dyck;
  ExtendedDyckGrammar ext;
  Classification cls;
  RegexSets regex_sets;
  ExtendedGraph extended;
  Refinement refinement;
  ApproxAutomaton automaton;
  RegularGrammar approximation;

  // Automata over bracket atoms for R and R_m, sharing one codec.
  AtomCodec codec;
  Nfa nfa_R() { return language_nfa(ext, extended.graph, cls, codec); }
  Nfa nfa_Rm() { return language_nfa(ext, refinement.graph.graph, cls, codec); }
};

Pipeline run_pipeline(const Cfg &g, const RefineOptions &opt = {});

Cfg load_grammar(const std::string &path);

}  // namespace dycknf
