#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "dycknf/grammar.hpp"

namespace dycknf {

// "[1 ]1 [2" style tokens separated by whitespace.
BracketWord parse_brackets(std::string_view text);
std::string to_string(const BracketWord &w);

// Erases indices when `keep` is empty; otherwise keeps only brackets of pair *keep.
BracketWord project(const BracketWord &w, std::optional<int> keep = std::nullopt);

// Balancedness over a single pair. Throws std::invalid_argument on a second index.
bool is_balanced(const BracketWord &w);

struct PairKind {
  bool matched = false;
  bool nested = false;
  bool reducible = false;
};

// Positions are 1-based and inclusive. Throws std::out_of_range.
PairKind pair_classify(const BracketWord &w, int i, int j);

// Matched-pair characterization, cubic in |w|.
bool dyck_membership(const BracketWord &w, int k);
// Plain stack matcher, used as the reference.
bool dyck_stack_check(const BracketWord &w, int k);

struct TraceWord {
  BracketWord brackets;
  Word source;
};

// Nonterminals rewritten along a leftmost derivation in a bracket-named grammar, axiom excluded.
TraceWord trace_word(const Cfg &bracketed, const Derivation &d);
TraceWord trace_word(const DyckGrammar &g, const Derivation &d);
TraceWord trace_word(const ExtendedDyckGrammar &g, const Derivation &d);

// Spans (1-based, inclusive) running from a left bracket to the end of its partner's subtree.
std::vector<std::pair<int, int>> pair_spans(const Cfg &bracketed, const Derivation &d);

struct TraceLanguage {
  std::map<BracketWord, std::size_t> derivations;  // trace -> number of derivations yielding it
  bool complete = true;                             // false when the step budget ran out
};

// All traces of words of length <= max_source_len, plus the extra-pair words.
TraceLanguage enumerate_trace_language(const ExtendedDyckGrammar &g, int max_source_len,
                                       std::size_t budget = 20'000'000);

}  // namespace dycknf
