#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "dycknf/automaton.hpp"
#include "dycknf/refine.hpp"

namespace dycknf {

// Transition diagram over terminals (labels are characters, Nfa::kEps for the empty move).
struct ApproxAutomaton {
  Nfa nfa;
  std::vector<std::string> names;  // state -> name; start is "S", the accepting state "F"
  int accept = -1;
  std::map<std::tuple<int, int, int>, std::set<std::string>> rules;  // (from, label, to) -> rule ids
};

// Keeps right brackets of left-terminal and right-terminal pairs and both brackets of terminal
// pairs; every other vertex of the refined graph is stepped over.
ApproxAutomaton build_automaton(const ExtendedDyckGrammar &g, const Classification &cls, const RefinedGraph &rg);

struct RegularGrammar {
  struct Rule {
    int lhs = 0;
    std::optional<char> t;  // nullopt only together with next < 0
    int next = -1;          // -1: the rule ends the word
  };
  std::vector<std::string> names;
  std::set<char> terminals;
  int start = 0;
  std::vector<Rule> rules;

  Cfg to_cfg() const;
  Nfa to_nfa() const;
};

RegularGrammar to_regular_grammar(const ApproxAutomaton &a);

std::set<std::string> enumerate_regular(const Nfa &a, int max_len);
std::set<std::string> enumerate_regular(const RegularGrammar &g, int max_len);

std::string automaton_dot(const ApproxAutomaton &a);
std::string automaton_json(const ApproxAutomaton &a);

}  // namespace dycknf
