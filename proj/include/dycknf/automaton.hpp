#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dycknf/regex.hpp"

namespace dycknf {

// Nondeterministic automaton over integer letters; label -1 is an empty move.
struct Nfa {
  static constexpr int kEps = -1;

  int start = 0;
  std::set<int> accepting;
  std::vector<std::vector<std::pair<int, int>>> out;  // state -> (label, target)

  int states() const { return static_cast<int>(out.size()); }
  int add_state();
  void add(int from, int label, int to);
  std::set<int> closure(std::set<int> s) const;
  std::set<int> step(const std::set<int> &s, int label) const;
  bool accepts(const std::vector<int> &w) const;
  std::set<int> alphabet() const;
};

// Dense ids for atoms so that regexes and graphs can share the Nfa code.
class AtomCodec {
 public:
  int id(const Atom &a);
  const Atom &at(int id) const { return atoms_.at(id); }
  std::size_t size() const { return atoms_.size(); }

 private:
  std::map<Atom, int> ids_;
  std::vector<Atom> atoms_;
};

// Glushkov automaton: state 0 initial, state p+1 for position p.
Nfa nfa_from_regex(const Regex &r, AtomCodec &codec);

struct Enumeration {
  std::set<std::vector<int>> words;
  bool complete = true;
};

// All accepted words of length <= max_len.
Enumeration enumerate_words(const Nfa &a, int max_len, std::size_t budget = 50'000'000);

// Only words that are well nested: `bracket` returns (pair, is_left) for bracket letters and
// nullopt for letters outside the bracket alphabet, which are rejected.
Enumeration enumerate_dyck_words(const Nfa &a, int max_len,
                                 const std::function<std::optional<std::pair<int, bool>>(int)> &bracket,
                                 std::size_t budget = 50'000'000);

// Number of distinct accepted words of length exactly `len`.
std::uint64_t count_words(const Nfa &a, int len);

// Automaton over characters, used for terminal languages.
std::vector<int> to_letters(const std::string &w);
std::string to_text(const std::vector<int> &w);

}  // namespace dycknf
