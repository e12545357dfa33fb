#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "dycknf/approx.hpp"
#include "dycknf/automaton.hpp"
#include "dycknf/grammar.hpp"

namespace dycknf {

// CYK table membership. Throws std::invalid_argument for a non-CNF grammar or a foreign letter.
bool cyk_membership(const Cfg &cnf, const Word &w);

// Breadth-first over leftmost sentential forms; valid pruning needs CNF (every nonterminal yields
// at least one letter), so other grammars are rejected.
std::set<Word> enumerate_language(const Cfg &cnf, int max_len);
std::set<Word> enumerate_language(const DyckGrammar &g, int max_len);

// Words by length through the CNF split table; throws std::length_error past `budget` words.
std::set<Word> language_by_length(const Cfg &cnf, int max_len, std::size_t budget = 2'000'000);

// Least fixpoint of per-nonterminal word sets truncated at max_len. Works for any grammar.
std::set<Word> language_fixpoint(const Cfg &g, int max_len);

// All words over `alphabet` up to max_len.
std::vector<Word> all_words(const std::set<char> &alphabet, int max_len);

struct RandomGrammarParams {
  int nonterminals = 4;
  int terminals = 2;
  int max_rules = 3;   // per nonterminal
  int max_rhs = 3;     // general grammars only
  double lambda = 0.1; // chance of a lambda rule (general grammars only)
};

Cfg random_cfg(std::mt19937_64 &rng, const RandomGrammarParams &p = {});
Cfg random_cnf(std::mt19937_64 &rng, const RandomGrammarParams &p = {});

struct Report {
  std::string claim;
  int bound = 0;
  bool holds = true;
  std::size_t diff = 0;
  std::vector<std::string> counterexamples;  // at most 10
  std::vector<std::string> notes;
  double seconds = 0;

  void witness(const std::string &w);
  std::string line() const;  // claim=<id> bound=<n> status=<holds|fails> |diff|=<m>
  std::string text() const;
};

// phi(D_K ∩ R) = L(g) up to length n, and D_K ∩ R = traces of words up to length n.
// `r` reads bracket atoms through `codec`; letters outside the bracket alphabet are rejected.
Report verify_cs(const ExtendedDyckGrammar &g, const Nfa &r, const AtomCodec &codec, int max_source_len,
                 const std::string &claim = "cs");
Report verify_cs(const ExtendedDyckGrammar &g, const Regex &r, int max_source_len, const std::string &claim = "cs");

// L(g) ⊆ L(gr) up to max_len; diff counts the words of gr outside L(g).
Report verify_superset(const DyckGrammar &g, const RegularGrammar &gr, int max_len);

// Conversion chain on a general grammar: CNF and Dyck form agree with it, Dyck conditions hold,
// random derivations map back through h_d.
Report verify_dycknf(const Cfg &g, int max_len, std::uint64_t seed);

}  // namespace dycknf
