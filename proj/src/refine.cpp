#include "dycknf/refine.hpp"

#include <cstdlib>
#include <deque>
#include <functional>
#include <sstream>

namespace dycknf {

std::vector<Regex> plus_expand(const Regex &r) {
  using Op = Regex::Op;
  auto dedupe = [](std::vector<Regex> v) {
    std::vector<Regex> out;
    std::set<Regex> seen;
    for (auto &x : v)
      if (seen.insert(x).second) out.push_back(x);
    return out;
  };
  auto loop = [&](const Regex &body, bool keep_empty) {
    std::vector<Regex> inner;
    bool had_eps = false;
    for (auto &x : plus_expand(body)) {
      if (x.op() == Op::Eps) had_eps = true;
      else inner.push_back(x);
    }
    std::vector<Regex> out;
    if (!inner.empty()) out.push_back(Regex::plus(Regex::alt(inner)));
    if (keep_empty || had_eps) out.push_back(Regex::eps());
    return out;
  };
  switch (r.op()) {
    case Op::Empty: return {};
    case Op::Eps:
    case Op::Sym: return {r};
    case Op::Alt: {
      std::vector<Regex> out;
      for (const auto &c : r.children()) {
        auto e = plus_expand(c);
        out.insert(out.end(), e.begin(), e.end());
      }
      return dedupe(out);
    }
    case Op::Cat: {
      std::vector<Regex> acc{Regex::eps()};
      for (const auto &c : r.children()) {
        auto e = plus_expand(c);
        std::vector<Regex> next;
        for (const auto &a : acc)
          for (const auto &b : e) next.push_back(Regex::cat(a, b));
        acc = dedupe(next);
      }
      return acc;
    }
    case Op::Star: return loop(r.children()[0], true);
    case Op::Plus: return loop(r.children()[0], false);
  }
  return {};
}

RegexSets plus_regex_sets(const DyckGrammar &g, const Classification &cls) {
  RegexSets out;
  std::vector<Atom> roots{Atom::axiom()};
  for (int j : cls.members(PairClass::N3)) roots.push_back(Atom::close(j));
  for (const Atom &root : roots) {
    auto dg = build_dependency_graph(g, cls, root);
    std::vector<Regex> v;
    std::set<Regex> seen;
    for (const auto &left : extract_left_regexes(dg))
      for (const auto &p : plus_expand(left)) {
        Regex m = mirror_extend(p, cls);
        if (seen.insert(m).second) v.push_back(m);
      }
    out[root] = v;
  }
  return out;
}

namespace {

// Labels every letter but the first with q and an occurrence mark, left to right.
Regex label_regex(const Regex &r, int q, std::map<Atom, int> &seen, bool &first) {
  using Op = Regex::Op;
  switch (r.op()) {
    case Op::Empty:
    case Op::Eps: return r;
    case Op::Sym: {
      Atom a = r.atom().plain();
      if (first) {
        first = false;
        return Regex::sym(a);
      }
      int m = seen[a]++;
      a.q = q;
      a.mark = m;
      return Regex::sym(a);
    }
    default: break;
  }
  std::vector<Regex> kids;
  for (const auto &c : r.children()) kids.push_back(label_regex(c, q, seen, first));
  switch (r.op()) {
    case Op::Cat: return Regex::cat(kids);
    case Op::Alt: return Regex::alt(kids);
    case Op::Star: return Regex::star(kids[0]);
    default: return Regex::plus(kids[0]);
  }
}

bool is_site_atom(const Atom &a, const Classification &cls) {
  return a.kind == Atom::Close && cls.of(a.idx) == PairClass::N3;
}

}  // namespace

TemplateSet label_templates(const RegexSets &plus_sets, const Classification &cls) {
  TemplateSet ts;
  for (const auto &[root, regs] : plus_sets) {
    for (const auto &r : regs) {
      Template t;
      t.root = root;
      t.q = static_cast<int>(ts.templates.size()) + 1;
      std::map<Atom, int> seen;
      bool first = true;
      t.regex = label_regex(r, t.q, seen, first);
      t.gl = glushkov(t.regex);
      if (t.gl.pos.empty() || t.gl.pos[0].plain() != root || t.gl.first != std::set<int>{0})
        throw std::invalid_argument("template " + r.str() + " does not start with its root");
      for (size_t p = 1; p < t.gl.pos.size(); ++p)
        if (is_site_atom(t.gl.pos[p], cls)) t.sites.push_back(static_cast<int>(p));
      t.terminal = true;
      for (int p : t.gl.last)
        if (p != 0 && is_site_atom(t.gl.pos[p], cls)) t.terminal = false;
      ts.family[root].push_back(static_cast<int>(ts.templates.size()));
      ts.templates.push_back(std::move(t));
    }
    if (root.kind == Atom::Axiom) ts.c0 = static_cast<int>(regs.size());
  }
  return ts;
}

namespace {

constexpr int kEnd = -1;

class Assembler {
 public:
  Assembler(const Classification &cls, const TemplateSet &ts, const RefineOptions &opt)
      : cls_(cls), ts_(ts), opt_(opt) {
    next_q_ = static_cast<int>(ts.templates.size()) + 1;
    std::size_t n3 = cls.members(PairClass::N3).size();
    cap_ = ts.templates.size() * std::max<std::size_t>(1, n3) * 64;
    if (const char *env = std::getenv("DYCKNF_MAX_ITER")) cap_ = std::strtoull(env, nullptr, 10);
    if (opt.max_connections) cap_ = *opt.max_connections;
    family_reach();
  }

  RefinedGraph run() {
    rg_.graph.initial = rg_.graph.add_vertex(Atom::axiom());
    auto it = ts_.family.find(Atom::axiom());
    if (it != ts_.family.end())
      for (int t : it->second) {
        int id = instantiate(t, ts_.templates[t].q, "G" + std::to_string(ts_.templates[t].q));
        originals_[t] = id;
        add_cont(id, kEnd);
      }
    while (!queue_.empty()) {
      auto [inst, p] = queue_.front();
      queue_.pop_front();
      queued_.erase({inst, p});
      process(inst, p);
    }
    rg_.connections = connections_;
    return std::move(rg_);
  }

 private:
  struct Inst {
    int tpl;
    int q;
    Atom family;
    std::vector<int> vtx;
    std::set<int> cont;
  };

  const Classification &cls_;
  const TemplateSet &ts_;
  const RefineOptions &opt_;
  RefinedGraph rg_;
  std::vector<Inst> insts_;
  std::map<int, int> originals_, pops_;
  std::map<std::pair<int, int>, int> copies_;  // (site vertex, template) -> instance
  std::deque<std::pair<int, int>> queue_;
  std::set<std::pair<int, int>> queued_;
  std::set<std::pair<int, int>> linked_;  // (site vertex, instance)
  std::map<Atom, std::set<Atom>> reach_;  // family call graph closure
  std::size_t cap_ = 0, connections_ = 0;
  int next_q_ = 1;

  void family_reach() {
    std::map<Atom, std::set<Atom>> calls;
    for (const auto &[root, ids] : ts_.family)
      for (int t : ids)
        for (int p : ts_.templates[t].sites) calls[root].insert(ts_.templates[t].gl.pos[p].plain());
    for (const auto &[root, _] : ts_.family) {
      std::set<Atom> seen;
      std::vector<Atom> st{root};
      while (!st.empty()) {
        Atom a = st.back();
        st.pop_back();
        for (const Atom &b : calls[a])
          if (seen.insert(b).second) st.push_back(b);
      }
      reach_[root] = seen;
    }
  }

  bool reaches(const Atom &a, const Atom &b) const {
    auto it = reach_.find(a);
    return it != reach_.end() && it->second.count(b);
  }
  bool same_scc(const Atom &a, const Atom &b) const { return a == b ? true : reaches(a, b) && reaches(b, a); }
  bool recursive(const Atom &f) const { return reaches(f, f); }

  // A template whose sites never re-enter the given family's component.
  bool leaf(int tpl, const Atom &f) const {
    const Template &t = ts_.templates[tpl];
    for (int p : t.sites)
      if (same_scc(t.gl.pos[p].plain(), f)) return false;
    return true;
  }

  void edge(int u, int v, RefinedGraph::EdgeKind k) {
    rg_.graph.add_edge(u, v);
    auto it = rg_.edge_kind.find({u, v});
    if (it == rg_.edge_kind.end()) rg_.edge_kind.emplace(std::make_pair(u, v), k);
    else if (k == RefinedGraph::EdgeKind::Glue) it->second = k;
  }

  int instantiate(int tpl, int q, const std::string &origin) {
    const Template &t = ts_.templates[tpl];
    Inst in{tpl, q, t.root, std::vector<int>(t.gl.pos.size(), -1), {}};
    for (size_t p = 1; p < t.gl.pos.size(); ++p) {
      Atom a = t.gl.pos[p];
      a.q = q;
      int v = rg_.graph.add_vertex(a);
      in.vtx[p] = v;
      if (is_site_atom(a, cls_)) rg_.sites.insert(v);
      if (a.kind == Atom::Open && cls_.of(a.idx) == PairClass::N1) rg_.cores.insert(v);
    }
    if (t.root.kind == Atom::Axiom) in.vtx[0] = rg_.graph.initial;
    int id = static_cast<int>(insts_.size());
    insts_.push_back(std::move(in));
    rg_.instances.push_back({tpl, q, origin});
    const Inst &I = insts_[id];
    for (size_t p = 0; p < t.gl.pos.size(); ++p) {
      if (p == 0 && t.root.kind != Atom::Axiom) continue;
      if (p != 0 && is_site_atom(t.gl.pos[p], cls_)) {
        enqueue(id, static_cast<int>(p));
        continue;
      }
      for (int f : t.gl.follow[p])
        edge(I.vtx[p], I.vtx[f], p == 0 ? RefinedGraph::EdgeKind::Link : RefinedGraph::EdgeKind::Internal);
    }
    if (q != t.q) rg_.log.push_back("copy G" + std::to_string(t.q) + " as G" + std::to_string(q) + " (" + origin + ")");
    return id;
  }

  void enqueue(int inst, int p) {
    if (queued_.insert({inst, p}).second) queue_.push_back({inst, p});
  }

  void add_cont(int inst, int c) {
    if (!insts_[inst].cont.insert(c).second) return;
    const Template &t = ts_.templates[insts_[inst].tpl];
    for (int p : t.gl.last) {
      if (p == 0) continue;
      int v = insts_[inst].vtx[p];
      if (is_site_atom(t.gl.pos[p], cls_)) enqueue(inst, p);
      else if (c == kEnd) rg_.graph.finals.insert(v);
      else edge(v, c, RefinedGraph::EdgeKind::Glue);
    }
  }

  int original(int tpl) {
    auto it = originals_.find(tpl);
    if (it != originals_.end()) return it->second;
    int q = ts_.templates[tpl].q;
    int id = instantiate(tpl, q, "G" + std::to_string(q));
    originals_[tpl] = id;
    return id;
  }

  int pop_copy(int tpl) {
    auto it = pops_.find(tpl);
    if (it != pops_.end()) return it->second;
    int id = instantiate(tpl, next_q_++, "pop vertex");
    pops_[tpl] = id;
    return id;
  }

  int site_copy(int site, int tpl) {
    auto it = copies_.find({site, tpl});
    if (it != copies_.end()) return it->second;
    int id = instantiate(tpl, next_q_++, "entered at " + rg_.graph.labels[site].str());
    copies_[{site, tpl}] = id;
    return id;
  }

  std::string chain(int inst) const {
    return rg_.instances[inst].origin + " -> G" + std::to_string(insts_[inst].q);
  }

  void link(int site, int callee, int cont, int caller) {
    if (linked_.insert({site, callee}).second) {
      if (++connections_ > cap_)
        throw RefineError("refinement connection cap " + std::to_string(cap_) + " exceeded at " +
                          rg_.graph.labels[site].str() + " via " + chain(caller));
      const Template &t = ts_.templates[insts_[callee].tpl];
      for (int f : t.gl.follow[0]) edge(site, insts_[callee].vtx[f], RefinedGraph::EdgeKind::Link);
    }
    add_cont(callee, cont);
  }

  void process(int inst, int p) {
    const Template &t = ts_.templates[insts_[inst].tpl];
    int site = insts_[inst].vtx[p];
    Atom callee = t.gl.pos[p].plain();
    std::set<int> conts;
    for (int f : t.gl.follow[p]) conts.insert(insts_[inst].vtx[f]);
    if (t.gl.last.count(p)) conts.insert(insts_[inst].cont.begin(), insts_[inst].cont.end());
    auto fam = ts_.family.find(callee);
    if (fam == ts_.family.end() || fam->second.empty()) return;  // left open; reported by open_sites
    Atom caller = insts_[inst].family;
    bool fork = opt_.loop_copies && recursive(callee) && !same_scc(caller, callee);
    for (int c : conts) {
      for (int tpl : fam->second) {
        int target;
        if (c == kEnd && opt_.pop_copies) target = pop_copy(tpl);
        else if (fork && leaf(tpl, callee)) target = site_copy(site, tpl);
        else target = original(tpl);
        link(site, target, c, inst);
      }
    }
  }
};

}  // namespace

RefinedGraph build_refined_graph(const DyckGrammar &g, const Classification &cls, const TemplateSet &ts,
                                 const RefineOptions &opt) {
  (void)g;
  Assembler a(cls, ts, opt);
  return a.run();
}

std::vector<int> open_sites(const RefinedGraph &rg) {
  std::vector<int> out;
  for (int v : rg.sites)
    if (rg.graph.succ[v].empty()) out.push_back(v);
  return out;
}

std::vector<std::string> context_violations(const RefinedGraph &rg, const Classification &cls) {
  const PathGraph &pg = rg.graph;
  std::vector<std::set<int>> pred(pg.vertices());
  for (int u = 0; u < pg.vertices(); ++u)
    for (int v : pg.succ[u]) pred[v].insert(u);
  auto c = [&](const Atom &a) { return cls.of(a.idx); };
  std::vector<std::string> out;
  for (int v : rg.sites) {
    for (int u : pred[v]) {
      const Atom &a = pg.labels[u];
      bool ok = (a.kind == Atom::Close && c(a) == PairClass::N2r) || (a.kind == Atom::Open && c(a) == PairClass::N1);
      if (!ok) out.push_back(a.str() + " before " + pg.labels[v].str());
    }
    for (int w : pg.succ[v]) {
      const Atom &a = pg.labels[w];
      bool ok = (a.kind == Atom::Open && c(a) != PairClass::N2l) || (a.kind == Atom::Close && c(a) == PairClass::N2l);
      if (!ok) out.push_back(a.str() + " after " + pg.labels[v].str());
    }
  }
  return out;
}

Regex regular_language_Rm(const ExtendedDyckGrammar &g, const RefinedGraph &rg, std::size_t class_cap) {
  Classification cls = classify_pairs(g.base);
  const PathGraph &pg = rg.graph;
  std::vector<Regex> parts;
  for (int f : pg.finals)
    for (const auto &r : pg.path_regexes(pg.initial, f, class_cap))
      parts.push_back(r.map([&](const Atom &a) { return Regex::word(expand_letter(a, cls)); }));
  for (const auto &x : g.extra) parts.push_back(Regex::word({Atom::open(x.pair), Atom::close(x.pair)}));
  return Regex::alt(parts);
}

std::string refined_dot(const RefinedGraph &rg, const Classification &cls) {
  const PathGraph &pg = rg.graph;
  auto quote = [](const std::string &s) { return "\"" + s + "\""; };
  std::ostringstream os;
  os << "digraph refined {\n  rankdir=LR;\n";
  for (int v = 0; v < pg.vertices(); ++v) {
    os << "  v" << v << " [label=" << quote(pg.labels[v].str());
    if (v == pg.initial) os << ", color=red, fontcolor=red";
    else if (pg.finals.count(v)) os << ", color=green, fontcolor=green";
    else if (rg.sites.count(v)) os << ", color=blue, fontcolor=blue";
    else if (rg.cores.count(v)) os << ", color=purple, fontcolor=purple";
    os << "];\n";
  }
  for (int u = 0; u < pg.vertices(); ++u)
    for (int v : pg.succ[u]) {
      os << "  v" << u << " -> v" << v;
      auto k = rg.edge_kind.at({u, v});
      const Atom &b = pg.labels[v];
      if (k == RefinedGraph::EdgeKind::Glue) os << " [color=green]";
      else if (b.kind == Atom::Close && cls.of(b.idx) != PairClass::N2l && cls.of(b.idx) != PairClass::N1)
        os << " [color=orange]";
      os << ";\n";
    }
  os << "}\n";
  return os.str();
}

Refinement refine(const DyckGrammar &g, const RefineOptions &opt) {
  Refinement r;
  r.cls = classify_pairs(g);
  r.plus_sets = plus_regex_sets(g, r.cls);
  r.templates = label_templates(r.plus_sets, r.cls);
  r.graph = build_refined_graph(g, r.cls, r.templates, opt);
  return r;
}

}  // namespace dycknf
