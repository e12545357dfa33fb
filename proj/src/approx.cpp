#include "dycknf/approx.hpp"

#include <deque>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace dycknf {

namespace {

enum class Kind { Start, Left2, Right2, Core, Skip };

Kind kind_of(const Atom &a, const Classification &cls) {
  if (a.kind == Atom::Axiom) return Kind::Start;
  if (a.kind == Atom::Close && cls.of(a.idx) == PairClass::N2l) return Kind::Left2;
  if (a.kind == Atom::Close && cls.of(a.idx) == PairClass::N2r) return Kind::Right2;
  if (a.kind == Atom::Open && cls.of(a.idx) == PairClass::N1) return Kind::Core;
  return Kind::Skip;
}

std::string rule_id(Kind from, Kind to) {
  switch (from) {
    case Kind::Start: return to == Kind::Left2 ? "1" : to == Kind::Core ? "2" : "0";
    case Kind::Left2: return to == Kind::Left2 ? "3" : to == Kind::Core ? "4" : "0";
    case Kind::Right2: return to == Kind::Right2 ? "5" : to == Kind::Left2 ? "6" : to == Kind::Core ? "7" : "0";
    case Kind::Core: return to == Kind::Right2 ? "8" : to == Kind::Core ? "9" : to == Kind::Left2 ? "6" : "0";
    default: return "0";
  }
}

std::string state_name(char side, const Atom &a) {
  std::string s(1, side);
  s += std::to_string(a.idx) + "Q" + std::to_string(a.q);
  if (a.mark) s += "H" + std::to_string(a.mark);
  return s;
}

}  // namespace

ApproxAutomaton build_automaton(const ExtendedDyckGrammar &g, const Classification &cls, const RefinedGraph &rg) {
  if (!open_sites(rg).empty()) throw std::invalid_argument("refined graph still has unconnected sites");
  const PathGraph &pg = rg.graph;
  ApproxAutomaton A;
  auto state = [&](const std::string &name) {
    A.names.push_back(name);
    return A.nfa.add_state();
  };
  A.nfa.start = state("S");
  A.accept = state("F");
  A.nfa.accepting.insert(A.accept);
  auto add = [&](int u, int label, int v, const std::string &rule) {
    A.nfa.add(u, label, v);
    A.rules[{u, label, v}].insert(rule);
  };
  int n = pg.vertices();
  std::vector<int> entry(n, -1), exit(n, -1);
  auto emit = [&](Bracket b) {
    auto c = g.base.image(b);
    return c ? static_cast<int>(static_cast<unsigned char>(*c)) : Nfa::kEps;
  };
  for (int v = 0; v < n; ++v) {
    const Atom &a = pg.labels[v];
    switch (kind_of(a, cls)) {
      case Kind::Start: entry[v] = exit[v] = A.nfa.start; break;
      case Kind::Left2:
      case Kind::Right2: entry[v] = exit[v] = state(state_name('R', a)); break;
      case Kind::Core:
        entry[v] = state(state_name('L', a));
        exit[v] = state(state_name('R', a));
        break;
      case Kind::Skip: break;
    }
  }
  auto first_letter = [&](int v) {
    const Atom &a = pg.labels[v];
    switch (kind_of(a, cls)) {
      case Kind::Left2:
      case Kind::Core: return emit({a.idx, Side::Left});
      default: return emit({a.idx, Side::Right});
    }
  };
  for (int u = 0; u < n; ++u) {
    if (exit[u] < 0) continue;
    Kind ku = kind_of(pg.labels[u], cls);
    std::set<int> seen;
    std::deque<int> q(pg.succ[u].begin(), pg.succ[u].end());
    while (!q.empty()) {
      int w = q.front();
      q.pop_front();
      if (!seen.insert(w).second) continue;
      Kind kw = kind_of(pg.labels[w], cls);
      if (kw == Kind::Skip) {
        for (int x : pg.succ[w]) q.push_back(x);
        continue;
      }
      if (kw == Kind::Start) continue;
      std::string rule = rule_id(ku, kw);
      add(exit[u], first_letter(w), entry[w], rule);
      if (kw == Kind::Core) add(entry[w], emit({pg.labels[w].idx, Side::Right}), exit[w], rule);
    }
  }
  for (int f : pg.finals)
    if (exit[f] >= 0) add(exit[f], Nfa::kEps, A.accept, "10");
  for (const auto &x : g.extra) {
    if (x.t) {
      int s = state("X" + std::to_string(x.pair));
      add(A.nfa.start, static_cast<unsigned char>(*x.t), s, "ext");
      add(s, Nfa::kEps, A.accept, "ext");
    } else {
      add(A.nfa.start, Nfa::kEps, A.accept, "ext");
    }
  }
  return A;
}

RegularGrammar to_regular_grammar(const ApproxAutomaton &a) {
  RegularGrammar g;
  std::vector<int> nt(a.nfa.states(), -1);
  for (int s = 0; s < a.nfa.states(); ++s)
    if (s != a.accept) {
      nt[s] = static_cast<int>(g.names.size());
      g.names.push_back(a.names[s]);
    }
  g.start = nt[a.nfa.start];
  for (const auto &[key, _] : a.rules) {
    auto [u, label, v] = key;
    RegularGrammar::Rule r;
    r.lhs = nt[u];
    if (label != Nfa::kEps) {
      r.t = static_cast<char>(label);
      g.terminals.insert(*r.t);
    }
    if (v == a.accept) {
      r.next = -1;
    } else {
      if (label == Nfa::kEps) throw std::logic_error("empty move between inner states");
      r.next = nt[v];
    }
    g.rules.push_back(r);
  }
  return g;
}

Cfg RegularGrammar::to_cfg() const {
  Cfg c;
  c.names = names;
  c.terminals = terminals;
  c.start = start;
  for (const auto &r : rules) {
    Production p{r.lhs, {}};
    if (r.t) p.rhs.push_back(Sym::t(*r.t));
    if (r.next >= 0) p.rhs.push_back(Sym::nt(r.next));
    c.productions.push_back(p);
  }
  return c;
}

Nfa RegularGrammar::to_nfa() const {
  Nfa a;
  for (size_t i = 0; i < names.size(); ++i) a.add_state();
  int acc = a.add_state();
  a.start = start;
  a.accepting.insert(acc);
  for (const auto &r : rules) {
    int label = r.t ? static_cast<unsigned char>(*r.t) : Nfa::kEps;
    a.add(r.lhs, label, r.next >= 0 ? r.next : acc);
  }
  return a;
}

std::set<std::string> enumerate_regular(const Nfa &a, int max_len) {
  std::set<std::string> out;
  auto e = enumerate_words(a, max_len);
  if (!e.complete) throw std::runtime_error("regular enumeration budget exhausted");
  for (const auto &w : e.words) out.insert(to_text(w));
  return out;
}

std::set<std::string> enumerate_regular(const RegularGrammar &g, int max_len) {
  return enumerate_regular(g.to_nfa(), max_len);
}

namespace {

std::string label_text(int l) { return l == Nfa::kEps ? "" : std::string(1, static_cast<char>(l)); }

}  // namespace

std::string automaton_dot(const ApproxAutomaton &a) {
  std::set<int> prefinal;
  for (const auto &[key, _] : a.rules)
    if (std::get<2>(key) == a.accept && std::get<1>(key) == Nfa::kEps) prefinal.insert(std::get<0>(key));
  std::ostringstream os;
  os << "digraph automaton {\n  rankdir=LR;\n";
  for (int s = 0; s < a.nfa.states(); ++s) {
    os << "  s" << s << " [label=\"" << a.names[s] << "\"";
    if (s == a.nfa.start) os << ", color=red, fontcolor=red";
    else if (prefinal.count(s)) os << ", color=green, fontcolor=green";
    if (s == a.accept) os << ", shape=doublecircle";
    os << "];\n";
  }
  for (const auto &[key, ids] : a.rules) {
    auto [u, l, v] = key;
    std::string rs;
    for (const auto &r : ids) rs += (rs.empty() ? "" : ",") + r;
    std::string lab = l == Nfa::kEps ? "λ" : label_text(l);
    os << "  s" << u << " -> s" << v << " [label=\"" << lab << " (" << rs << ")\"];\n";
  }
  os << "}\n";
  return os.str();
}

std::string automaton_json(const ApproxAutomaton &a) {
  nlohmann::ordered_json j;
  j["states"] = a.names;
  std::set<std::string> alphabet;
  nlohmann::ordered_json triples = nlohmann::ordered_json::array();
  for (const auto &[key, ids] : a.rules) {
    auto [u, l, v] = key;
    if (l != Nfa::kEps) alphabet.insert(label_text(l));
    triples.push_back({a.names[u], label_text(l), a.names[v], std::vector<std::string>(ids.begin(), ids.end())});
  }
  j["alphabet"] = alphabet;
  j["transitions"] = triples;
  j["start"] = a.names[a.nfa.start];
  j["accepting"] = {a.names[a.accept]};
  return j.dump(2);
}

}  // namespace dycknf
