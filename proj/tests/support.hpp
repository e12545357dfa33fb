#pragma once

#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "dycknf/dyck.hpp"
#include "dycknf/pipeline.hpp"

namespace dycknf::testing {

inline std::string fixture_path(const std::string &name) { return std::string(DYCKNF_GRAMMARS) + "/" + name + ".cfg"; }
inline Cfg fixture(const std::string &name) { return load_grammar(fixture_path(name)); }

// expected normal form of the expr fixture, pair numbering as printed in the reference
inline const char *kExprDyck = R"(start: E0
E0 -> 'a' | [1 ]1 | [2 ]2 | [3 ]3 | [4 ]4
[1 -> [1 ]1 | [4 ]4
[2 -> [1 ]1 | [2 ]2 | [3 ]3 | [4 ]4
]1 -> [7 ]7
]2 -> [5 ]5 | [6 ]6
]3 -> [5 ]5 | [6 ]6
]4 -> [7 ]7
]5 -> [1 ]1 | [4 ]4
[3 -> 'a'
[4 -> 'a'
[5 -> '+'
[6 -> '+'
]6 -> 'a'
[7 -> '*'
]7 -> 'a'
)";

inline auto bracket_reader(const AtomCodec &codec) {
  return [&codec](int l) -> std::optional<std::pair<int, bool>> {
    if (l < 0 || l >= static_cast<int>(codec.size())) return std::nullopt;
    const Atom &a = codec.at(l);
    if (!a.is_bracket()) return std::nullopt;
    return std::make_pair(a.idx, a.kind == Atom::Open);
  };
}

inline BracketWord decode(const AtomCodec &codec, const std::vector<int> &w) {
  BracketWord b;
  for (int l : w) b.push_back(codec.at(l).bracket());
  return b;
}

inline std::set<BracketWord> decode_all(const AtomCodec &codec, const std::set<std::vector<int>> &ws) {
  std::set<BracketWord> out;
  for (const auto &w : ws) out.insert(decode(codec, w));
  return out;
}

inline std::set<BracketWord> trace_set(const TraceLanguage &t) {
  std::set<BracketWord> out;
  for (const auto &[w, _] : t.derivations) out.insert(w);
  return out;
}

// (abb)^m aa (d(cb)^n)^m and (abb)^+ aa (d(cb)^+)^+ membership
inline bool in_lin_language(const std::string &w, bool loose) {
  std::size_t i = 0;
  int m = 0;
  while (w.compare(i, 3, "abb") == 0) i += 3, ++m;
  if (m == 0 || w.compare(i, 2, "aa") != 0) return false;
  i += 2;
  int blocks = 0;
  while (i < w.size()) {
    if (w[i] != 'd') return false;
    ++i;
    int n = 0;
    while (w.compare(i, 2, "cb") == 0) i += 2, ++n;
    if (n == 0) return false;
    ++blocks;
  }
  return blocks > 0 && (loose || blocks == m);
}

inline std::set<std::string> strings_up_to(const std::set<char> &alphabet, int n) {
  std::set<std::string> out;
  for (auto &w : all_words(alphabet, n)) out.insert(w);
  return out;
}

}  // namespace dycknf::testing
