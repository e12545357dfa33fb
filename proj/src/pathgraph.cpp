#include "dycknf/pathgraph.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <stdexcept>

namespace dycknf {

int PathGraph::add_vertex(const Atom &a) {
  labels.push_back(a);
  succ.emplace_back();
  return vertices() - 1;
}

void PathGraph::add_edge(int u, int v) {
  if (u < 0 || v < 0 || u >= vertices() || v >= vertices()) throw std::out_of_range("PathGraph::add_edge");
  succ[u].insert(v);
}

int PathGraph::find(const Atom &a) const {
  for (int v = 0; v < vertices(); ++v)
    if (labels[v] == a) return v;
  return -1;
}

std::set<int> PathGraph::reachable(int from) const {
  std::set<int> seen{from};
  std::vector<int> st{from};
  while (!st.empty()) {
    int u = st.back();
    st.pop_back();
    for (int v : succ[u])
      if (seen.insert(v).second) st.push_back(v);
  }
  return seen;
}

namespace {

struct CapExceeded {};

// Subgraph view: member vertices, with every in-edge of a blocked vertex dropped.
struct Sub {
  std::vector<char> in;
  std::vector<char> blocked;
};

class LoopNesting {
 public:
  LoopNesting(const PathGraph &g, std::size_t cap) : g_(g), cap_(cap) {}

  std::vector<Regex> paths(const Sub &sub, int s, int t) {
    int n = g_.vertices();
    std::vector<int> comp(n, -1);
    int ncomp = tarjan(sub, comp);
    if (comp[s] < 0 || comp[t] < 0) return {};
    // components that can reach comp[t]
    std::vector<std::set<int>> members(ncomp);
    for (int v = 0; v < n; ++v)
      if (comp[v] >= 0) members[comp[v]].insert(v);
    std::vector<char> useful(ncomp, 0);
    useful[comp[t]] = 1;
    // Tarjan numbers components in reverse topological order, so successors come first.
    for (int c = 0; c < ncomp; ++c)
      for (int u : members[c])
        for (int v : g_.succ[u])
          if (edge(sub, u, v) && comp[v] != c && useful[comp[v]]) useful[c] = 1;
    std::vector<Regex> out;
    std::function<void(int, std::vector<Regex>)> walk = [&](int a, std::vector<Regex> prefix) {
      int c = comp[a];
      for (int x : members[c]) {
        bool last = c == comp[t];
        std::vector<int> exits;
        for (int y : g_.succ[x])
          if (edge(sub, x, y) && comp[y] != c && useful[comp[y]]) exits.push_back(y);
        if (last && x != t) continue;
        if (!last && exits.empty()) continue;
        auto inner = scc_paths(sub, members[c], a, x);
        if (inner.empty()) continue;
        auto joined = product(prefix, inner);
        if (last) {
          out.insert(out.end(), joined.begin(), joined.end());
          if (out.size() > cap_) throw CapExceeded{};
          continue;
        }
        for (int y : exits) walk(y, joined);
      }
    };
    if (useful[comp[s]]) walk(s, {Regex::eps()});
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
  }

 private:
  const PathGraph &g_;
  std::size_t cap_;

  bool edge(const Sub &sub, int u, int v) const {
    return sub.in[u] && sub.in[v] && !sub.blocked[v] && g_.succ[u].count(v);
  }

  std::vector<Regex> product(const std::vector<Regex> &a, const std::vector<Regex> &b) {
    std::vector<Regex> out;
    for (const auto &x : a)
      for (const auto &y : b) out.push_back(Regex::cat(x, y));
    if (out.size() > cap_) throw CapExceeded{};
    return out;
  }

  std::vector<Regex> scc_paths(const Sub &sub, const std::set<int> &c, int a, int x) {
    bool self = edge(sub, a, a);
    if (c.size() == 1 && !self) return a == x ? std::vector<Regex>{Regex::sym(g_.labels[a])} : std::vector<Regex>{};
    Sub inner = sub;
    std::fill(inner.in.begin(), inner.in.end(), 0);
    for (int v : c) inner.in[v] = 1;
    inner.blocked[a] = 1;
    std::vector<Regex> loop;
    for (int b : c)
      if (edge(sub, b, a)) {
        auto p = paths(inner, a, b);
        loop.insert(loop.end(), p.begin(), p.end());
      }
    Regex body = Regex::star(Regex::alt(loop));
    std::vector<Regex> out;
    for (const auto &d : paths(inner, a, x)) out.push_back(Regex::cat(body, d));
    return out;
  }

  int tarjan(const Sub &sub, std::vector<int> &comp) {
    int n = g_.vertices(), counter = 0, ncomp = 0;
    std::vector<int> index(n, -1), low(n, 0);
    std::vector<char> on(n, 0);
    std::vector<int> st;
    std::function<void(int)> dfs = [&](int u) {
      index[u] = low[u] = counter++;
      st.push_back(u);
      on[u] = 1;
      for (int v : g_.succ[u]) {
        if (!edge(sub, u, v)) continue;
        if (index[v] < 0) {
          dfs(v);
          low[u] = std::min(low[u], low[v]);
        } else if (on[v]) {
          low[u] = std::min(low[u], index[v]);
        }
      }
      if (low[u] == index[u]) {
        while (true) {
          int w = st.back();
          st.pop_back();
          on[w] = 0;
          comp[w] = ncomp;
          if (w == u) break;
        }
        ++ncomp;
      }
    };
    for (int v = 0; v < n; ++v)
      if (sub.in[v] && index[v] < 0) dfs(v);
    return ncomp;
  }
};

}  // namespace

std::vector<Regex> PathGraph::path_regexes(int src, int dst, std::size_t class_cap) const {
  int n = vertices();
  if (src < 0 || dst < 0 || src >= n || dst >= n) throw std::out_of_range("path_regexes endpoint");
  Sub sub{std::vector<char>(n, 1), std::vector<char>(n, 0)};
  LoopNesting ln(*this, class_cap);
  try {
    return ln.paths(sub, src, dst);
  } catch (const CapExceeded &) {
    Regex r = eliminate_paths(*this, src, dst);
    if (r.op() == Regex::Op::Empty) return {};
    return {r};
  }
}

Regex eliminate_paths(const PathGraph &g, int src, int dst) {
  int n = g.vertices();
  auto fwd = g.reachable(src);
  if (!fwd.count(dst)) return Regex::empty();
  // vertices that can reach dst
  std::vector<std::set<int>> pred(n);
  for (int u = 0; u < n; ++u)
    for (int v : g.succ[u]) pred[v].insert(u);
  std::set<int> back{dst};
  std::vector<int> st{dst};
  while (!st.empty()) {
    int v = st.back();
    st.pop_back();
    for (int u : pred[v])
      if (back.insert(u).second) st.push_back(u);
  }
  std::vector<int> keep;
  for (int v : fwd)
    if (back.count(v)) keep.push_back(v);
  // generalized automaton: I = n, F = n + 1; entering a vertex reads its label
  const int I = n, F = n + 1;
  std::map<std::pair<int, int>, Regex> e;
  auto addto = [&](int u, int v, const Regex &r) {
    auto it = e.find({u, v});
    if (it == e.end()) e.emplace(std::make_pair(u, v), r);
    else it->second = Regex::alt(it->second, r);
  };
  std::set<int> kept(keep.begin(), keep.end());
  addto(I, src, Regex::sym(g.labels[src]));
  addto(dst, F, Regex::eps());
  for (int u : keep)
    for (int v : g.succ[u])
      if (kept.count(v)) addto(u, v, Regex::sym(g.labels[v]));
  // descending label order
  std::sort(keep.begin(), keep.end(), [&](int a, int b) { return g.labels[b] < g.labels[a]; });
  std::set<int> alive(keep.begin(), keep.end());
  alive.insert(I);
  alive.insert(F);
  for (int x : keep) {
    Regex loop = Regex::eps();
    if (auto it = e.find({x, x}); it != e.end()) loop = Regex::star(it->second);
    std::vector<std::pair<int, Regex>> ins, outs;
    for (int u : alive)
      if (u != x)
        if (auto it = e.find({u, x}); it != e.end()) ins.push_back({u, it->second});
    for (int v : alive)
      if (v != x)
        if (auto it = e.find({x, v}); it != e.end()) outs.push_back({v, it->second});
    for (auto &[u, a] : ins)
      for (auto &[v, b] : outs) addto(u, v, Regex::cat({a, loop, b}));
    alive.erase(x);
    for (auto it = e.begin(); it != e.end();)
      it = (it->first.first == x || it->first.second == x) ? e.erase(it) : std::next(it);
  }
  auto it = e.find({I, F});
  return it == e.end() ? Regex::empty() : it->second;
}

Nfa PathGraph::to_nfa(AtomCodec &codec, const std::function<std::vector<Atom>(const Atom &)> &expand) const {
  Nfa a;
  int n = vertices();
  std::vector<int> in(n), out(n);
  for (int v = 0; v < n; ++v) {
    in[v] = a.add_state();
    int cur = in[v];
    for (const Atom &x : expand(labels[v])) {
      int nx = a.add_state();
      a.add(cur, codec.id(x), nx);
      cur = nx;
    }
    out[v] = cur;
  }
  for (int u = 0; u < n; ++u)
    for (int v : succ[u]) a.add(out[u], Nfa::kEps, in[v]);
  if (initial < 0) {
    a.start = a.states() ? 0 : a.add_state();
    a.accepting.clear();
    return a;
  }
  a.start = in[initial];
  for (int f : finals) a.accepting.insert(out[f]);
  return a;
}

}  // namespace dycknf
