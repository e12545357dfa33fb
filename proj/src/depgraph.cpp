#include "dycknf/depgraph.hpp"

#include <deque>
#include <functional>
#include <sstream>
#include <stdexcept>

namespace dycknf {

namespace {

bool opens_inward(PairClass c) { return c == PairClass::N2r || c == PairClass::N3; }

Atom target_of(int pair, const Classification &cls) {
  return cls.of(pair) == PairClass::N2l ? Atom::close(pair) : Atom::open(pair);
}

int node_for(const Atom &a) {
  if (a.kind == Atom::Axiom) return 0;
  return node_of(a.bracket());
}

}  // namespace

DependencyGraph build_dependency_graph(const DyckGrammar &g, const Classification &cls, const Atom &root) {
  bool ok = root.kind == Atom::Axiom ||
            (root.kind == Atom::Close && root.idx >= 1 && root.idx <= g.k && cls.of(root.idx) == PairClass::N3);
  if (!ok) throw std::invalid_argument("dependency graph root must be the axiom or ]j of a pair with no terminal side");
  DependencyGraph dg;
  dg.root = root.plain();
  PathGraph &pg = dg.graph;
  std::map<Atom, int> id;
  auto vertex = [&](const Atom &a) {
    auto it = id.find(a);
    if (it != id.end()) return it->second;
    int v = pg.add_vertex(a);
    id.emplace(a, v);
    return v;
  };
  pg.initial = vertex(dg.root);
  std::deque<int> queue{pg.initial};
  std::set<int> done;
  while (!queue.empty()) {
    int v = queue.front();
    queue.pop_front();
    if (!done.insert(v).second) continue;
    Atom a = pg.labels[v];
    bool expands = v == pg.initial || (a.kind == Atom::Open && opens_inward(cls.of(a.idx))) ||
                   (a.kind == Atom::Close && cls.of(a.idx) == PairClass::N2l);
    if (!expands) continue;
    for (int m : g.pairs[node_for(a)]) {
      int w = vertex(target_of(m, cls));
      pg.add_edge(v, w);
      queue.push_back(w);
    }
  }
  for (int v = 0; v < pg.vertices(); ++v) {
    const Atom &a = pg.labels[v];
    if (a.kind == Atom::Open && cls.of(a.idx) == PairClass::N1) pg.finals.insert(v);
  }
  for (int i : cls.members(PairClass::N1))
    if (!id.count(Atom::open(i))) dg.unreachable_finals.insert(i);
  return dg;
}

std::vector<Regex> extract_left_regexes(const DependencyGraph &dg) {
  std::vector<int> finals(dg.graph.finals.begin(), dg.graph.finals.end());
  std::sort(finals.begin(), finals.end(),
            [&](int a, int b) { return dg.graph.labels[a] < dg.graph.labels[b]; });
  std::vector<Regex> out;
  for (int f : finals) {
    auto rs = dg.graph.path_regexes(dg.graph.initial, f);
    out.insert(out.end(), rs.begin(), rs.end());
  }
  return out;
}

Regex mirror_extend(const Regex &r, const Classification &cls) {
  Regex right = r.reverse().map([&](const Atom &a) {
    if (a.kind == Atom::Open && opens_inward(cls.of(a.idx))) return Regex::sym(Atom::close(a.idx, a.q));
    return Regex::eps();
  });
  return Regex::cat(r, right);
}

RegexSets build_regex_sets(const DyckGrammar &g, const Classification &cls) {
  RegexSets out;
  std::vector<Atom> roots{Atom::axiom()};
  for (int j : cls.members(PairClass::N3)) roots.push_back(Atom::close(j));
  for (const Atom &root : roots) {
    auto dg = build_dependency_graph(g, cls, root);
    std::vector<Regex> v;
    for (const auto &r : extract_left_regexes(dg)) v.push_back(mirror_extend(r, cls));
    out[root] = v;
  }
  return out;
}

namespace {

bool is_n3_close(const Atom &a, const Classification &cls) {
  return a.kind == Atom::Close && cls.of(a.idx) == PairClass::N3;
}

using GlushkovSets = std::map<Atom, std::vector<Glushkov>>;

GlushkovSets glushkov_sets(const RegexSets &res) {
  GlushkovSets out;
  for (const auto &[root, regs] : res) {
    auto &v = out[root];
    for (const auto &r : regs) v.push_back(glushkov(r));
  }
  return out;
}

// Last letters reachable by unfolding trailing no-terminal right brackets; bool = reached directly.
void tail_ends(const Atom &k, const GlushkovSets &gs, const Classification &cls, bool direct, std::set<int> &seen,
               std::set<std::pair<Atom, bool>> &out) {
  if (!seen.insert(k.idx).second) return;
  auto it = gs.find(k.plain());
  if (it == gs.end()) throw std::invalid_argument("missing regex set for " + k.str());
  for (const auto &gl : it->second) {
    for (int p : gl.last) {
      Atom a = gl.pos[p].plain();
      if (p != 0 && is_n3_close(a, cls)) tail_ends(a, gs, cls, false, seen, out);
      else out.insert({a, direct});
    }
  }
}

class TailEnds {
 public:
  TailEnds(const GlushkovSets &gs, const Classification &cls) : gs_(gs), cls_(cls) {}
  const std::set<std::pair<Atom, bool>> &operator()(const Atom &k) {
    auto it = memo_.find(k.idx);
    if (it != memo_.end()) return it->second;
    std::set<int> seen;
    std::set<std::pair<Atom, bool>> out;
    tail_ends(k, gs_, cls_, true, seen, out);
    return memo_.emplace(k.idx, std::move(out)).first->second;
  }

 private:
  const GlushkovSets &gs_;
  const Classification &cls_;
  std::map<int, std::set<std::pair<Atom, bool>>> memo_;
};

std::string pair_item(const Atom &x, const Atom &y, const Classification &cls) {
  auto c = [&](const Atom &a) { return cls.of(a.idx); };
  bool x_l2 = x.kind == Atom::Close && c(x) == PairClass::N2l;
  bool x_in = x.kind == Atom::Open && opens_inward(c(x));
  bool y_l2 = y.kind == Atom::Close && c(y) == PairClass::N2l;
  bool y_in = y.kind == Atom::Open && opens_inward(c(y));
  bool y_core = y.kind == Atom::Open && c(y) == PairClass::N1;
  if (x_l2 && y_l2) return "2";
  if ((x_l2 && y_in) || (x_in && y_l2)) return "3";
  if (x_in && y_in) return "4";
  if ((x_l2 || x_in) && y_core) return "5";
  if (x.kind == Atom::Close && c(x) == PairClass::N2r) return "8.i";
  if (x.kind == Atom::Open && c(x) == PairClass::N1) return "9.i";
  return "other";
}

}  // namespace

ExtendedGraph build_extended_graph(const DyckGrammar &g, const Classification &cls, const RegexSets &res) {
  (void)g;
  ExtendedGraph eg;
  PathGraph &pg = eg.graph;
  std::map<Atom, int> id;
  auto vertex = [&](const Atom &a) {
    Atom p = a.plain();
    auto it = id.find(p);
    if (it != id.end()) return it->second;
    int v = pg.add_vertex(p);
    id.emplace(p, v);
    return v;
  };
  auto edge = [&](const Atom &x, const Atom &y, const std::string &item) {
    int u = vertex(x), v = vertex(y);
    pg.add_edge(u, v);
    eg.edge_items[{u, v}].insert(item);
    if (y.kind == Atom::Close && opens_inward(cls.of(y.idx))) eg.mirror_edges.insert({u, v});
  };
  pg.initial = vertex(Atom::axiom());
  if (!res.count(Atom::axiom())) throw std::invalid_argument("missing regex set for the axiom");
  GlushkovSets gs = glushkov_sets(res);
  TailEnds tail_ends(gs, cls);
  for (const auto &[root, gls] : gs) {
    for (const auto &gl : gls) {
      for (size_t p = 0; p < gl.pos.size(); ++p) {
        Atom x = gl.pos[p].plain();
        for (int f : gl.follow[p]) {
          Atom y = gl.pos[f].plain();
          if (p == 0) {
            if (root.kind == Atom::Axiom) edge(x, y, "1");
            else edge(x, y, y.kind == Atom::Open && cls.of(y.idx) == PairClass::N1 ? "6" : "7");
          } else if (is_n3_close(x, cls)) {
            for (auto [e, direct] : tail_ends(x)) {
              std::string base = e.kind == Atom::Open ? "9" : "8";
              edge(e, y, base + (direct ? ".ii" : ".iii"));
            }
          } else {
            edge(x, y, pair_item(x, y, cls));
          }
        }
      }
    }
  }
  for (const auto &gl : gs.at(Atom::axiom())) {
    for (int p : gl.last) {
      Atom a = gl.pos[p].plain();
      if (p != 0 && is_n3_close(a, cls)) {
        for (auto [e, direct] : tail_ends(a)) {
          int v = vertex(e);
          pg.finals.insert(v);
          eg.final_items[v].insert(std::string(e.kind == Atom::Open ? "10" : "11") + (direct ? ".ii" : ".iii"));
        }
      } else {
        int v = vertex(a);
        pg.finals.insert(v);
        eg.final_items[v].insert(std::string(a.kind == Atom::Open ? "10" : "11") + ".i");
      }
    }
  }
  return eg;
}

std::vector<Atom> expand_letter(const Atom &a, const Classification &cls) {
  switch (a.kind) {
    case Atom::Axiom: return {};
    case Atom::Term: return {a.plain()};
    case Atom::Open:
      if (cls.of(a.idx) == PairClass::N1) return {Atom::open(a.idx), Atom::close(a.idx)};
      return {Atom::open(a.idx)};
    case Atom::Close:
      if (cls.of(a.idx) == PairClass::N2l) return {Atom::open(a.idx), Atom::close(a.idx)};
      return {Atom::close(a.idx)};
  }
  return {};
}

Regex regular_language_R(const ExtendedDyckGrammar &g, const ExtendedGraph &eg, std::size_t class_cap) {
  Classification cls = classify_pairs(g.base);
  std::vector<Regex> parts;
  const PathGraph &pg = eg.graph;
  for (int f : pg.finals)
    for (const auto &r : pg.path_regexes(pg.initial, f, class_cap))
      parts.push_back(r.map([&](const Atom &a) { return Regex::word(expand_letter(a, cls)); }));
  for (const auto &x : g.extra) parts.push_back(Regex::word({Atom::open(x.pair), Atom::close(x.pair)}));
  return Regex::alt(parts);
}

Nfa language_nfa(const ExtendedDyckGrammar &g, const PathGraph &graph, const Classification &cls,
                 AtomCodec &codec) {
  Nfa a = graph.to_nfa(codec, [&](const Atom &x) { return expand_letter(x, cls); });
  if (!g.extra.empty()) {
    int start = a.start;
    for (const auto &x : g.extra) {
      int s1 = a.add_state(), s2 = a.add_state();
      a.add(start, codec.id(Atom::open(x.pair)), s1);
      a.add(s1, codec.id(Atom::close(x.pair)), s2);
      a.accepting.insert(s2);
    }
  }
  return a;
}

namespace {

std::string quote_dot(const std::string &s) {
  std::string o = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') o += '\\';
    o += c;
  }
  return o + "\"";
}

std::string display(const Atom &a, const Classification &cls) {
  std::string s = a.str();
  if (a.is_bracket() && a.idx <= static_cast<int>(cls.cls.size()) - 1 && cls.of(a.idx) == PairClass::N1) s += " t";
  return s;
}

}  // namespace

std::string dependency_dot(const DependencyGraph &dg, const Classification &cls) {
  std::ostringstream os;
  const PathGraph &pg = dg.graph;
  os << "digraph dependency {\n  rankdir=LR;\n";
  for (int v = 0; v < pg.vertices(); ++v) {
    os << "  v" << v << " [label=" << quote_dot(display(pg.labels[v], cls));
    if (v == pg.initial) os << ", color=red, fontcolor=red";
    else if (pg.finals.count(v)) os << ", color=blue, fontcolor=blue";
    os << "];\n";
  }
  for (int u = 0; u < pg.vertices(); ++u)
    for (int v : pg.succ[u]) os << "  v" << u << " -> v" << v << ";\n";
  os << "}\n";
  return os.str();
}

std::string extended_dot(const ExtendedGraph &eg, const Classification &cls) {
  std::ostringstream os;
  const PathGraph &pg = eg.graph;
  os << "digraph extended {\n  rankdir=LR;\n";
  for (int v = 0; v < pg.vertices(); ++v) {
    os << "  v" << v << " [label=" << quote_dot(display(pg.labels[v], cls));
    if (v == pg.initial) os << ", color=red, fontcolor=red";
    else if (pg.finals.count(v)) os << ", color=blue, fontcolor=blue";
    os << "];\n";
  }
  for (int u = 0; u < pg.vertices(); ++u)
    for (int v : pg.succ[u]) {
      std::string items;
      for (const auto &it : eg.edge_items.at({u, v})) items += (items.empty() ? "" : ",") + it;
      os << "  v" << u << " -> v" << v << " [label=" << quote_dot(items);
      if (eg.mirror_edges.count({u, v})) os << ", color=orange";
      os << "];\n";
    }
  os << "}\n";
  return os.str();
}

}  // namespace dycknf
