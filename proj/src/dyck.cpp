#include "dycknf/dyck.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace dycknf {

BracketWord parse_brackets(std::string_view text) {
  BracketWord out;
  size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    char c = text[i];
    if (c != '[' && c != ']') throw std::invalid_argument("bad bracket token at offset " + std::to_string(i));
    size_t b = ++i;
    while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
    if (b == i) throw std::invalid_argument("bracket without index at offset " + std::to_string(b - 1));
    int idx = std::stoi(std::string(text.substr(b, i - b)));
    out.push_back({idx, c == '[' ? Side::Left : Side::Right});
  }
  return out;
}

std::string to_string(const BracketWord &w) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += ' ';
    out += bracket_name(w[i]);
  }
  return out;
}

BracketWord project(const BracketWord &w, std::optional<int> keep) {
  BracketWord out;
  for (const Bracket &b : w) {
    if (!keep) out.push_back({1, b.side});
    else if (b.pair == *keep) out.push_back(b);
  }
  return out;
}

bool is_balanced(const BracketWord &w) {
  int depth = 0;
  for (const Bracket &b : w) {
    if (b.pair != w.front().pair) throw std::invalid_argument("is_balanced expects a single bracket pair");
    depth += b.side == Side::Left ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

namespace {

bool matched_span(const BracketWord &w, int i, int j) {
  // h erases indices, so only the depth profile matters
  int depth = 0;
  for (int p = i; p <= j; ++p) {
    depth += w[p - 1].side == Side::Left ? 1 : -1;
    if (depth < 0) return false;
  }
  return depth == 0;
}

}  // namespace

PairKind pair_classify(const BracketWord &w, int i, int j) {
  int n = static_cast<int>(w.size());
  if (i < 1 || j > n || i > j) throw std::out_of_range("pair positions out of range");
  PairKind k;
  k.matched = matched_span(w, i, j);
  if (!k.matched) return k;
  k.nested = j == i + 1 || matched_span(w, i + 1, j - 1);
  for (int m = i + 1; m < j - 1 && !k.reducible; ++m)
    k.reducible = matched_span(w, i, m) && matched_span(w, m + 1, j);
  return k;
}

bool dyck_membership(const BracketWord &w, int k) {
  int n = static_cast<int>(w.size());
  if (n == 0) return true;
  for (const Bracket &b : w)
    if (b.pair < 1 || b.pair > k) return false;
  if (!matched_span(w, 1, n)) return false;
  for (int i = 1; i <= n; ++i) {
    int depth = 0;
    for (int j = i; j <= n; ++j) {
      depth += w[j - 1].side == Side::Left ? 1 : -1;
      if (depth < 0) break;
      if (depth != 0) continue;
      // (i, j) is matched: every per-index projection must balance
      std::map<int, int> per;
      for (int p = i; p <= j; ++p) {
        int &d = per[w[p - 1].pair];
        d += w[p - 1].side == Side::Left ? 1 : -1;
        if (d < 0) return false;
      }
      for (auto &[_, d] : per)
        if (d != 0) return false;
    }
  }
  return true;
}

bool dyck_stack_check(const BracketWord &w, int k) {
  std::vector<int> st;
  for (const Bracket &b : w) {
    if (b.pair < 1 || b.pair > k) return false;
    if (b.side == Side::Left) {
      st.push_back(b.pair);
    } else {
      if (st.empty() || st.back() != b.pair) return false;
      st.pop_back();
    }
  }
  return st.empty();
}

namespace {

Bracket bracket_from_name(const std::string &name) {
  if (name.size() < 2 || (name[0] != '[' && name[0] != ']'))
    throw std::invalid_argument("nonterminal " + name + " is not a bracket");
  return {std::stoi(name.substr(1)), name[0] == '[' ? Side::Left : Side::Right};
}

struct Node {
  int sym;
  int pos = 0;  // preorder position, 0 for the axiom
  std::vector<int> kids;
};

// Replays a leftmost derivation, building the derivation tree.
std::vector<Node> build_tree(const Cfg &g, const Derivation &d, Word *word) {
  std::vector<Node> nodes{{g.start, 0, {}}};
  std::vector<int> form{0};  // node ids; terminals are encoded as -1 - char
  int counter = 0;
  for (size_t k = 0; k < d.size(); ++k) {
    int r = d[k];
    if (r < 0 || r >= static_cast<int>(g.productions.size()))
      throw std::invalid_argument("derivation step " + std::to_string(k) + ": no such production");
    auto it = std::find_if(form.begin(), form.end(), [](int x) { return x >= 0; });
    if (it == form.end()) throw std::invalid_argument("derivation continues after a terminal word");
    int id = *it;
    const Production &p = g.productions[r];
    if (nodes[id].sym != p.lhs) throw std::invalid_argument("derivation step " + std::to_string(k) + " is not leftmost");
    if (k > 0) nodes[id].pos = ++counter;
    std::vector<int> repl;
    for (const Sym &s : p.rhs) {
      if (s.term) {
        repl.push_back(-1 - static_cast<unsigned char>(s.ch()));
      } else {
        nodes.push_back({s.id, 0, {}});
        int child = static_cast<int>(nodes.size()) - 1;
        nodes[id].kids.push_back(child);
        repl.push_back(child);
      }
    }
    it = form.erase(it);
    form.insert(it, repl.begin(), repl.end());
  }
  Word w;
  for (int x : form) {
    if (x >= 0) throw std::invalid_argument("incomplete derivation");
    w += static_cast<char>(-1 - x);
  }
  if (word) *word = w;
  return nodes;
}

}  // namespace

TraceWord trace_word(const Cfg &g, const Derivation &d) {
  TraceWord t;
  auto nodes = build_tree(g, d, &t.source);
  std::vector<std::pair<int, int>> order;
  for (size_t i = 1; i < nodes.size(); ++i)
    if (nodes[i].pos > 0) order.push_back({nodes[i].pos, static_cast<int>(i)});
  std::sort(order.begin(), order.end());
  for (auto [_, id] : order) t.brackets.push_back(bracket_from_name(g.names[nodes[id].sym]));
  return t;
}

TraceWord trace_word(const DyckGrammar &g, const Derivation &d) { return trace_word(g.to_cfg(), d); }

TraceWord trace_word(const ExtendedDyckGrammar &g, const Derivation &d) { return trace_word(g.to_cfg(), d); }

std::vector<std::pair<int, int>> pair_spans(const Cfg &g, const Derivation &d) {
  auto nodes = build_tree(g, d, nullptr);
  std::vector<int> last(nodes.size(), 0);
  std::function<int(int)> fill = [&](int v) {
    int m = nodes[v].pos;
    for (int c : nodes[v].kids) m = std::max(m, fill(c));
    return last[v] = m;
  };
  fill(0);
  std::vector<std::pair<int, int>> out;
  for (const Node &n : nodes)
    if (n.kids.size() == 2) out.push_back({nodes[n.kids[0]].pos, last[n.kids[1]]});
  std::sort(out.begin(), out.end());
  return out;
}

TraceLanguage enumerate_trace_language(const ExtendedDyckGrammar &e, int n, std::size_t budget) {
  TraceLanguage out;
  const DyckGrammar &g = e.base;
  std::vector<int> stack;
  BracketWord trace;
  std::size_t steps = 0;
  std::function<void(int)> dfs = [&](int terms) {
    if (!out.complete) return;
    if (++steps > budget) {
      out.complete = false;
      return;
    }
    if (stack.empty()) {
      ++out.derivations[trace];
      return;
    }
    int node = stack.back();
    stack.pop_back();
    trace.push_back(bracket_of(node));
    int pending = static_cast<int>(stack.size());
    if (terms + 1 + pending <= n)
      for (size_t c = 0; c < g.terms[node].size(); ++c) dfs(terms + 1);
    if (terms + pending + 2 <= n)
      for (int m : g.pairs[node]) {
        stack.push_back(node_of({m, Side::Right}));
        stack.push_back(node_of({m, Side::Left}));
        dfs(terms);
        stack.resize(stack.size() - 2);
      }
    trace.pop_back();
    stack.push_back(node);
  };
  if (n >= 2)
    for (int m : g.pairs[0]) {
      stack = {node_of({m, Side::Right}), node_of({m, Side::Left})};
      dfs(0);
    }
  for (const auto &x : e.extra)
    if ((x.t ? 1 : 0) <= n) ++out.derivations[{{x.pair, Side::Left}, {x.pair, Side::Right}}];
  return out;
}

}  // namespace dycknf
