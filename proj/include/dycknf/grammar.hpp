#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace dycknf {

// A grammar symbol: nonterminal index or a single-character terminal.
struct Sym {
  bool term = false;
  int id = 0;

  static Sym nt(int i) { return {false, i}; }
  static Sym t(char c) { return {true, static_cast<unsigned char>(c)}; }
  char ch() const { return static_cast<char>(id); }
  auto operator<=>(const Sym &) const = default;
};

struct Production {
  int lhs = 0;
  std::vector<Sym> rhs;  // empty means lambda
  auto operator<=>(const Production &) const = default;
};

struct Cfg {
  std::vector<std::string> names;  // nonterminal id -> name
  std::set<char> terminals;
  int start = 0;
  std::vector<Production> productions;

  int find(std::string_view name) const;
  int add_nonterminal(const std::string &name);
  // Returns an unused name derived from `base`.
  std::string fresh_name(const std::string &base) const;
  std::vector<std::vector<int>> rules_by_lhs() const;
  std::string to_string() const;
  // Throws std::invalid_argument when an id is out of range or a terminal is undeclared.
  void validate() const;
};

using CnfGrammar = Cfg;
using Word = std::string;
// A leftmost derivation: production indices in application order.
using Derivation = std::vector<int>;

bool is_cnf(const Cfg &g);
std::string production_string(const Cfg &g, const Production &p);

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int column, const std::string &msg);
  int line;
  int column;
};

Cfg parse_grammar(std::string_view text);

// Drops non-generating and unreachable nonterminals; the start symbol is always kept.
Cfg remove_useless(const Cfg &g);

struct CnfReport {
  std::vector<std::string> steps;
  bool unchanged = false;
};

std::pair<Cfg, CnfReport> to_cnf(const Cfg &g);

// Replays a leftmost derivation and returns the derived word. Throws on an invalid step.
Word replay(const Cfg &g, const Derivation &d);

// ---- Dyck normal form ----

enum class Side : std::uint8_t { Left, Right };

struct Bracket {
  int pair = 1;
  Side side = Side::Left;
  auto operator<=>(const Bracket &) const = default;
};

using BracketWord = std::vector<Bracket>;

// Node numbering: 0 is the axiom, [i is 2i-1, ]i is 2i.
inline int node_of(Bracket b) { return b.side == Side::Left ? 2 * b.pair - 1 : 2 * b.pair; }
inline Bracket bracket_of(int node) {
  return {(node + 1) / 2, node % 2 == 1 ? Side::Left : Side::Right};
}
std::string bracket_name(Bracket b);

struct DyckRule {
  int lhs = 0;                 // node id
  int pair = 0;                // >0: lhs -> [pair ]pair
  std::optional<char> t;       // pair == 0: lhs -> t, or lambda when empty
};

struct DyckGrammar {
  std::string axiom = "S";
  int k = 0;
  std::set<char> terminals;
  std::vector<std::set<int>> pairs;   // per node: i such that node -> [i ]i
  std::vector<std::set<char>> terms;  // per node: terminal rules
  bool axiom_lambda = false;

  int nodes() const { return 2 * k + 1; }
  void resize(int pairs_count);
  // phi image of a bracket: its terminal, or nullopt for lambda.
  std::optional<char> image(Bracket b) const;
  std::string node_name(int node) const;
  // Canonical rule list; derivations over a DyckGrammar index into it.
  std::vector<DyckRule> rules() const;
  Cfg to_cfg() const;
  std::string to_string() const;
};

// Violated conditions of the normal form (1..4), empty when the grammar complies.
std::vector<int> dnf_violations(const Cfg &g);

// Reads a grammar already in the normal form. Bracket-named nonterminals keep their index.
DyckGrammar dyck_from_cfg(const Cfg &g);
bool looks_bracketed(const Cfg &g);

struct RenamingMap {
  std::vector<std::string> source_names;  // nonterminals of the CNF grammar
  std::vector<int> origin;                // Dyck node -> CNF nonterminal id
  bool is_identity() const;
};

struct DyckConversion {
  DyckGrammar grammar;
  RenamingMap map;
  Cfg source;                     // CNF grammar the map refers to (fresh start added if needed)
  Cfg renamed;                    // intermediate grammar with substituted names
  std::vector<std::string> log;
};

DyckConversion to_dyck_nf(const Cfg &cnf);

// Permutation p (p[i] = image of pair i, slot 0 unused) making the two rule sets equal, if any.
std::optional<std::vector<int>> pair_renaming(const DyckGrammar &a, const DyckGrammar &b);

// Derivation in the Dyck grammar -> derivation in conv.source.
Derivation map_derivation_h_d(const DyckConversion &conv, const Derivation &d);
Word replay(const DyckGrammar &g, const Derivation &d);

enum class PairClass : std::uint8_t { N1, N2l, N2r, N3 };
std::string to_string(PairClass c);

struct Classification {
  std::vector<PairClass> cls;  // index 1..k, slot 0 unused
  PairClass of(int pair) const { return cls.at(pair); }
  std::vector<int> members(PairClass c) const;
};

Classification classify_pairs(const DyckGrammar &g);

struct ExtendedDyckGrammar {
  struct Extra {
    int pair = 0;
    std::optional<char> t;  // nullopt: the pair stands for S -> lambda
  };
  DyckGrammar base;
  std::vector<Extra> extra;
  int K = 0;

  bool is_extra(int pair) const { return pair > base.k && pair <= K; }
  std::optional<char> image(Bracket b) const;
  // Base rules minus the axiom's terminal and lambda rules, then per extra pair:
  // S -> [p ]p, [p -> t (or lambda), ]p -> lambda.
  Cfg to_cfg() const;
};

ExtendedDyckGrammar extend_grammar(const DyckGrammar &g);

Word apply_phi(const ExtendedDyckGrammar &g, const BracketWord &w);

}  // namespace dycknf
