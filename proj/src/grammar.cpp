#include "dycknf/grammar.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <sstream>

namespace dycknf {

// ---------------------------------------------------------------- Cfg

int Cfg::find(std::string_view name) const {
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

int Cfg::add_nonterminal(const std::string &name) {
  int id = find(name);
  if (id >= 0) return id;
  names.push_back(name);
  return static_cast<int>(names.size()) - 1;
}

std::string Cfg::fresh_name(const std::string &base) const {
  if (find(base) < 0) return base;
  for (int n = 1;; ++n) {
    std::string cand = base + std::to_string(n);
    if (find(cand) < 0) return cand;
  }
}

std::vector<std::vector<int>> Cfg::rules_by_lhs() const {
  std::vector<std::vector<int>> out(names.size());
  for (size_t i = 0; i < productions.size(); ++i) out[productions[i].lhs].push_back(static_cast<int>(i));
  return out;
}

namespace {

std::string quote(const std::string &s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out += '\\';
    out += c;
  }
  return out + "'";
}

std::string rhs_string(const Cfg &g, const std::vector<Sym> &rhs) {
  if (rhs.empty()) return "''";
  std::string out, run;
  auto flush = [&] {
    if (run.empty()) return;
    if (!out.empty()) out += ' ';
    out += quote(run);
    run.clear();
  };
  for (const Sym &s : rhs) {
    if (s.term) {
      run += s.ch();
      continue;
    }
    flush();
    if (!out.empty()) out += ' ';
    out += g.names[s.id];
  }
  flush();
  return out;
}

}  // namespace

std::string production_string(const Cfg &g, const Production &p) {
  return g.names[p.lhs] + " -> " + rhs_string(g, p.rhs);
}

std::string Cfg::to_string() const {
  std::ostringstream os;
  os << "start: " << names[start] << "\n";
  auto by = rules_by_lhs();
  // start first, then left-hand sides in production order
  std::vector<int> order{start};
  for (const auto &p : productions)
    if (std::find(order.begin(), order.end(), p.lhs) == order.end()) order.push_back(p.lhs);
  for (int x : order) {
    if (by[x].empty()) continue;
    os << names[x] << " ->";
    for (size_t j = 0; j < by[x].size(); ++j)
      os << (j ? " | " : " ") << rhs_string(*this, productions[by[x][j]].rhs);
    os << "\n";
  }
  return os.str();
}

void Cfg::validate() const {
  int n = static_cast<int>(names.size());
  if (start < 0 || start >= n) throw std::invalid_argument("start symbol out of range");
  for (const auto &p : productions) {
    if (p.lhs < 0 || p.lhs >= n) throw std::invalid_argument("production lhs out of range");
    for (const Sym &s : p.rhs) {
      if (s.term && !terminals.count(s.ch()))
        throw std::invalid_argument(std::string("undeclared terminal '") + s.ch() + "'");
      if (!s.term && (s.id < 0 || s.id >= n)) throw std::invalid_argument("rhs nonterminal out of range");
    }
  }
}

bool is_cnf(const Cfg &g) {
  bool start_lambda = false, start_on_rhs = false;
  for (const auto &p : g.productions) {
    if (p.rhs.empty()) {
      if (p.lhs != g.start) return false;
      start_lambda = true;
    } else if (p.rhs.size() == 1) {
      if (!p.rhs[0].term) return false;
    } else if (p.rhs.size() == 2) {
      if (p.rhs[0].term || p.rhs[1].term) return false;
      if (p.rhs[0].id == g.start || p.rhs[1].id == g.start) start_on_rhs = true;
    } else {
      return false;
    }
  }
  return !(start_lambda && start_on_rhs);
}

// ---------------------------------------------------------------- parsing

ParseError::ParseError(int l, int c, const std::string &msg)
    : std::runtime_error("line " + std::to_string(l) + ", column " + std::to_string(c) + ": " + msg),
      line(l),
      column(c) {}

namespace {

bool is_name_start(char c) { return c >= 'A' && c <= 'Z'; }
bool is_name_char(char c) { return std::isalnum(static_cast<unsigned char>(c)) || c == '_'; }

struct LineScanner {
  std::string_view s;
  int line;
  size_t i = 0;

  void skip_ws() {
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t' || s[i] == '\r')) ++i;
  }
  bool done() {
    skip_ws();
    return i >= s.size();
  }
  [[noreturn]] void fail(const std::string &msg) const { throw ParseError(line, static_cast<int>(i) + 1, msg); }

  // Nonterminal name or bracket token; empty when none is present.
  std::string symbol() {
    skip_ws();
    size_t b = i;
    if (i < s.size() && (s[i] == '[' || s[i] == ']')) {
      ++i;
      size_t d = i;
      while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
      if (i == d) fail("bracket token needs an index");
      return std::string(s.substr(b, i - b));
    }
    if (i < s.size() && is_name_start(s[i])) {
      while (i < s.size() && is_name_char(s[i])) ++i;
      return std::string(s.substr(b, i - b));
    }
    return {};
  }

  std::string quoted() {
    ++i;  // opening quote
    std::string out;
    while (i < s.size() && s[i] != '\'') {
      if (s[i] == '\\' && i + 1 < s.size()) ++i;
      out += s[i++];
    }
    if (i >= s.size()) fail("unterminated terminal string");
    ++i;
    return out;
  }
};

}  // namespace

Cfg parse_grammar(std::string_view text) {
  Cfg g;
  bool have_start = false;
  std::string start_name;
  int start_line = 0;
  std::set<int> has_rules;
  int line_no = 0;
  size_t pos = 0;
  while (pos <= text.size()) {
    size_t nl = text.find('\n', pos);
    if (nl == std::string_view::npos) nl = text.size();
    std::string_view line = text.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    LineScanner sc{line, line_no};
    if (sc.done() || line[sc.i] == '#') {
      if (nl == text.size()) break;
      continue;
    }
    if (!have_start) {
      if (line.substr(sc.i, 6) != "start:") sc.fail("expected 'start: <Nonterminal>'");
      sc.i += 6;
      start_name = sc.symbol();
      if (start_name.empty()) sc.fail("expected start nonterminal");
      if (!sc.done()) sc.fail("unexpected text after start declaration");
      g.start = g.add_nonterminal(start_name);
      have_start = true;
      start_line = line_no;
      if (nl == text.size()) break;
      continue;
    }
    std::string lhs = sc.symbol();
    if (lhs.empty()) sc.fail("expected nonterminal on the left-hand side");
    sc.skip_ws();
    if (line.substr(sc.i, 2) != "->") sc.fail("expected '->'");
    sc.i += 2;
    int lhs_id = g.add_nonterminal(lhs);
    has_rules.insert(lhs_id);
    std::vector<Sym> rhs;
    bool alt_has_token = false;
    auto finish_alt = [&] {
      if (!alt_has_token) sc.fail("empty production body (use '' for lambda)");
      g.productions.push_back({lhs_id, rhs});
      rhs.clear();
      alt_has_token = false;
    };
    while (true) {
      sc.skip_ws();
      if (sc.i >= line.size()) {
        finish_alt();
        break;
      }
      char c = line[sc.i];
      if (c == '|') {
        finish_alt();
        ++sc.i;
        continue;
      }
      if (c == '\'') {
        for (char t : sc.quoted()) {
          g.terminals.insert(t);
          rhs.push_back(Sym::t(t));
        }
        alt_has_token = true;
        continue;
      }
      std::string name = sc.symbol();
      if (name.empty()) sc.fail(std::string("unexpected character '") + c + "'");
      rhs.push_back(Sym::nt(g.add_nonterminal(name)));
      alt_has_token = true;
    }
    if (nl == text.size()) break;
  }
  if (!have_start) throw ParseError(1, 1, "missing 'start:' declaration");
  if (!has_rules.count(g.start)) throw ParseError(start_line, 1, "start symbol " + start_name + " has no productions");
  return g;
}

// ---------------------------------------------------------------- CNF

Cfg remove_useless(const Cfg &g) {
  int n = static_cast<int>(g.names.size());
  std::vector<bool> gen(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &p : g.productions) {
      if (gen[p.lhs]) continue;
      bool ok = std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Sym &s) { return s.term || gen[s.id]; });
      if (ok) gen[p.lhs] = changed = true;
    }
  }
  auto usable = [&](const Production &p) {
    return gen[p.lhs] && std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Sym &s) { return s.term || gen[s.id]; });
  };
  std::vector<bool> reach(n, false);
  reach[g.start] = true;
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &p : g.productions) {
      if (!reach[p.lhs] || !usable(p)) continue;
      for (const Sym &s : p.rhs)
        if (!s.term && !reach[s.id]) reach[s.id] = changed = true;
    }
  }
  Cfg out;
  std::vector<int> remap(n, -1);
  for (int i = 0; i < n; ++i)
    if (reach[i] && (gen[i] || i == g.start)) remap[i] = out.add_nonterminal(g.names[i]);
  out.start = remap[g.start];
  std::set<Production> seen;
  for (const auto &p : g.productions) {
    if (!reach[p.lhs] || !usable(p)) continue;
    Production q{remap[p.lhs], {}};
    for (const Sym &s : p.rhs) {
      if (s.term) out.terminals.insert(s.ch());
      q.rhs.push_back(s.term ? s : Sym::nt(remap[s.id]));
    }
    if (seen.insert(q).second) out.productions.push_back(q);
  }
  return out;
}

namespace {

void dedupe(Cfg &g) {
  std::set<Production> seen;
  std::vector<Production> out;
  for (auto &p : g.productions)
    if (seen.insert(p).second) out.push_back(p);
  g.productions = std::move(out);
}

std::string terminal_tag(char c) {
  if (std::isalnum(static_cast<unsigned char>(c))) return std::string(1, c);
  const char *hex = "0123456789ABCDEF";
  unsigned char u = static_cast<unsigned char>(c);
  return std::string("x") + hex[u >> 4] + hex[u & 15];
}

}  // namespace

std::pair<Cfg, CnfReport> to_cnf(const Cfg &input) {
  input.validate();
  CnfReport rep;
  if (is_cnf(input)) {
    rep.unchanged = true;
    rep.steps.push_back("input already in CNF");
    return {input, rep};
  }
  Cfg g = input;

  // START
  bool start_on_rhs = false;
  for (const auto &p : g.productions)
    for (const Sym &s : p.rhs)
      if (!s.term && s.id == g.start) start_on_rhs = true;
  if (start_on_rhs) {
    int s0 = g.add_nonterminal(g.fresh_name(g.names[g.start] + "0"));
    g.productions.push_back({s0, {Sym::nt(g.start)}});
    g.start = s0;
    rep.steps.push_back("START: new start " + g.names[s0]);
  }

  // TERM
  std::map<char, int> term_nt;
  size_t nprod = g.productions.size();
  for (size_t i = 0; i < nprod; ++i) {
    if (g.productions[i].rhs.size() < 2) continue;
    for (size_t j = 0; j < g.productions[i].rhs.size(); ++j) {
      Sym s = g.productions[i].rhs[j];
      if (!s.term) continue;
      auto it = term_nt.find(s.ch());
      if (it == term_nt.end()) {
        int id = g.add_nonterminal(g.fresh_name("T_" + terminal_tag(s.ch())));
        g.productions.push_back({id, {s}});
        it = term_nt.emplace(s.ch(), id).first;
      }
      g.productions[i].rhs[j] = Sym::nt(it->second);
    }
  }
  if (!term_nt.empty()) rep.steps.push_back("TERM: " + std::to_string(term_nt.size()) + " terminal nonterminals");

  // BIN
  int bin_count = 0;
  nprod = g.productions.size();
  for (size_t i = 0; i < nprod; ++i) {
    while (g.productions[i].rhs.size() > 2) {
      Production &p = g.productions[i];
      int id = g.add_nonterminal(g.fresh_name(g.names[p.lhs] + "_b"));
      ++bin_count;
      std::vector<Sym> tail(p.rhs.begin() + 1, p.rhs.end());
      g.productions[i].rhs = {g.productions[i].rhs[0], Sym::nt(id)};
      g.productions.push_back({id, tail});
      // continue splitting the newly added tail production
      size_t last = g.productions.size() - 1;
      while (g.productions[last].rhs.size() > 2) {
        Production &q = g.productions[last];
        int id2 = g.add_nonterminal(g.fresh_name(g.names[q.lhs] + "_b"));
        ++bin_count;
        std::vector<Sym> t2(q.rhs.begin() + 1, q.rhs.end());
        g.productions[last].rhs = {g.productions[last].rhs[0], Sym::nt(id2)};
        g.productions.push_back({id2, t2});
        last = g.productions.size() - 1;
      }
    }
  }
  if (bin_count) rep.steps.push_back("BIN: " + std::to_string(bin_count) + " chain nonterminals");

  // DEL
  int n = static_cast<int>(g.names.size());
  std::vector<bool> nullable(n, false);
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &p : g.productions) {
      if (nullable[p.lhs]) continue;
      if (std::all_of(p.rhs.begin(), p.rhs.end(), [&](const Sym &s) { return !s.term && nullable[s.id]; }))
        nullable[p.lhs] = changed = true;
    }
  }
  std::vector<Production> del;
  for (const auto &p : g.productions) {
    size_t m = p.rhs.size();
    for (unsigned mask = 0; mask < (1u << m); ++mask) {
      Production q{p.lhs, {}};
      bool ok = true;
      for (size_t j = 0; j < m; ++j) {
        if (mask & (1u << j)) {
          if (p.rhs[j].term || !nullable[p.rhs[j].id]) ok = false;
        } else {
          q.rhs.push_back(p.rhs[j]);
        }
      }
      if (ok && !q.rhs.empty()) del.push_back(q);
    }
  }
  if (nullable[g.start]) del.push_back({g.start, {}});
  g.productions = del;
  dedupe(g);
  rep.steps.push_back("DEL: lambda rules removed");

  // UNIT
  std::vector<std::set<int>> unit(n);
  for (int a = 0; a < n; ++a) {
    std::vector<int> stack{a};
    unit[a].insert(a);
    while (!stack.empty()) {
      int x = stack.back();
      stack.pop_back();
      for (const auto &p : g.productions)
        if (p.lhs == x && p.rhs.size() == 1 && !p.rhs[0].term && unit[a].insert(p.rhs[0].id).second)
          stack.push_back(p.rhs[0].id);
    }
  }
  std::vector<Production> nu;
  for (int a = 0; a < n; ++a)
    for (int b : unit[a])
      for (const auto &p : g.productions) {
        if (p.lhs != b) continue;
        if (p.rhs.size() == 1 && !p.rhs[0].term) continue;
        if (p.rhs.empty() && a != g.start) continue;
        nu.push_back({a, p.rhs});
      }
  g.productions = nu;
  dedupe(g);
  rep.steps.push_back("UNIT: unit rules removed");

  g = remove_useless(g);
  rep.steps.push_back("useless symbols removed");
  return {g, rep};
}

Word replay(const Cfg &g, const Derivation &d) {
  std::vector<Sym> form{Sym::nt(g.start)};
  for (size_t k = 0; k < d.size(); ++k) {
    int r = d[k];
    if (r < 0 || r >= static_cast<int>(g.productions.size()))
      throw std::invalid_argument("derivation step " + std::to_string(k) + ": no such production");
    auto it = std::find_if(form.begin(), form.end(), [](const Sym &s) { return !s.term; });
    if (it == form.end()) throw std::invalid_argument("derivation continues after a terminal word");
    const Production &p = g.productions[r];
    if (it->id != p.lhs)
      throw std::invalid_argument("derivation step " + std::to_string(k) + ": production does not rewrite " +
                                  g.names[it->id]);
    it = form.erase(it);
    form.insert(it, p.rhs.begin(), p.rhs.end());
  }
  Word w;
  for (const Sym &s : form) {
    if (!s.term) throw std::invalid_argument("incomplete derivation");
    w += s.ch();
  }
  return w;
}

// ---------------------------------------------------------------- Dyck grammars

std::string bracket_name(Bracket b) { return (b.side == Side::Left ? "[" : "]") + std::to_string(b.pair); }

void DyckGrammar::resize(int kk) {
  k = kk;
  pairs.assign(nodes(), {});
  terms.assign(nodes(), {});
}

std::optional<char> DyckGrammar::image(Bracket b) const {
  if (b.pair < 1 || b.pair > k) throw std::out_of_range("unknown bracket " + bracket_name(b));
  const auto &t = terms[node_of(b)];
  if (t.empty()) return std::nullopt;
  return *t.begin();
}

std::string DyckGrammar::node_name(int node) const { return node == 0 ? axiom : bracket_name(bracket_of(node)); }

std::vector<DyckRule> DyckGrammar::rules() const {
  std::vector<DyckRule> out;
  for (int x = 0; x < nodes(); ++x) {
    for (int i : pairs[x]) out.push_back({x, i, std::nullopt});
    for (char c : terms[x]) out.push_back({x, 0, c});
    if (x == 0 && axiom_lambda) out.push_back({0, 0, std::nullopt});
  }
  return out;
}

Cfg DyckGrammar::to_cfg() const {
  Cfg g;
  for (int x = 0; x < nodes(); ++x) g.names.push_back(node_name(x));
  g.start = 0;
  g.terminals = terminals;
  for (const DyckRule &r : rules()) {
    Production p{r.lhs, {}};
    if (r.pair) {
      p.rhs = {Sym::nt(node_of({r.pair, Side::Left})), Sym::nt(node_of({r.pair, Side::Right}))};
    } else if (r.t) {
      p.rhs = {Sym::t(*r.t)};
    }
    g.productions.push_back(p);
  }
  return g;
}

std::string DyckGrammar::to_string() const { return to_cfg().to_string(); }

std::optional<std::vector<int>> pair_renaming(const DyckGrammar &a, const DyckGrammar &b) {
  if (a.k != b.k || a.terminals != b.terminals || a.axiom_lambda != b.axiom_lambda || a.terms[0] != b.terms[0])
    return std::nullopt;
  int k = a.k;
  auto fits = [&](int i, int j) {
    for (Side s : {Side::Left, Side::Right}) {
      int x = node_of({i, s}), y = node_of({j, s});
      if (a.terms[x] != b.terms[y] || a.pairs[x].size() != b.pairs[y].size()) return false;
    }
    return true;
  };
  std::vector<int> p(k + 1, 0);
  std::vector<bool> used(k + 1, false);
  auto mapped = [&](const std::set<int> &s) {
    std::set<int> out;
    for (int i : s) out.insert(p[i]);
    return out;
  };
  auto check = [&] {
    if (mapped(a.pairs[0]) != b.pairs[0]) return false;
    for (int i = 1; i <= k; ++i)
      for (Side s : {Side::Left, Side::Right})
        if (mapped(a.pairs[node_of({i, s})]) != b.pairs[node_of({p[i], s})]) return false;
    return true;
  };
  std::function<bool(int)> go = [&](int i) {
    if (i > k) return check();
    for (int j = 1; j <= k; ++j) {
      if (used[j] || !fits(i, j)) continue;
      used[j] = true;
      p[i] = j;
      if (go(i + 1)) return true;
      used[j] = false;
    }
    return false;
  };
  if (!go(1)) return std::nullopt;
  return p;
}

std::vector<int> dnf_violations(const Cfg &g) {
  std::vector<int> out;
  if (!is_cnf(g)) out.push_back(1);
  auto by = g.rules_by_lhs();
  for (size_t x = 0; x < by.size(); ++x) {
    if (static_cast<int>(x) == g.start) continue;
    bool has_t = false;
    for (int r : by[x])
      if (g.productions[r].rhs.size() == 1 && g.productions[r].rhs[0].term) has_t = true;
    if (has_t && by[x].size() > 1) {
      out.push_back(2);
      break;
    }
  }
  std::map<int, std::set<int>> left_partners, right_partners;  // right nt -> lefts, left nt -> rights
  for (const auto &p : g.productions) {
    if (p.rhs.size() != 2 || p.rhs[0].term || p.rhs[1].term) continue;
    right_partners[p.rhs[0].id].insert(p.rhs[1].id);
    left_partners[p.rhs[1].id].insert(p.rhs[0].id);
  }
  for (const auto &[a, _] : right_partners)
    if (left_partners.count(a)) {
      out.push_back(3);
      break;
    }
  bool c4 = false;
  for (const auto &[a, s] : right_partners) c4 |= s.size() > 1;
  for (const auto &[b, s] : left_partners) c4 |= s.size() > 1;
  if (c4) out.push_back(4);
  return out;
}

bool looks_bracketed(const Cfg &g) {
  for (int i = 0; i < static_cast<int>(g.names.size()); ++i) {
    if (i == g.start) continue;
    const std::string &n = g.names[i];
    if (n.size() < 2 || (n[0] != '[' && n[0] != ']')) return false;
  }
  return true;
}

namespace {

// (lhs name, rhs names) ordering used for deterministic pair numbering.
std::vector<int> canonical_order(const Cfg &g) {
  std::vector<int> idx(g.productions.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  auto key = [&](int i) {
    const auto &p = g.productions[i];
    std::vector<std::string> k{g.names[p.lhs]};
    for (const Sym &s : p.rhs) k.push_back(s.term ? std::string("'") + s.ch() : g.names[s.id]);
    return k;
  };
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return key(a) < key(b); });
  return idx;
}

// Assigns pair indices and fills a DyckGrammar; node_origin receives node -> Cfg id.
DyckGrammar build_dyck(const Cfg &g, std::vector<int> *node_origin) {
  auto bad = dnf_violations(g);
  if (!bad.empty()) throw std::invalid_argument("grammar violates normal-form condition " + std::to_string(bad[0]));
  for (const auto &p : g.productions)
    for (const Sym &s : p.rhs)
      if (!s.term && s.id == g.start) throw std::invalid_argument("axiom occurs on a right-hand side");
  std::map<std::pair<int, int>, int> index;
  if (looks_bracketed(g)) {
    int kmax = 0;
    for (const auto &p : g.productions) {
      if (p.rhs.size() != 2) continue;
      const std::string &a = g.names[p.rhs[0].id], &b = g.names[p.rhs[1].id];
      if (a[0] != '[' || b[0] != ']' || a.substr(1) != b.substr(1))
        throw std::invalid_argument("bracket rule " + production_string(g, p) + " does not use a matching pair");
      int i = std::stoi(a.substr(1));
      if (i < 1) throw std::invalid_argument("bracket index must be positive");
      index[{p.rhs[0].id, p.rhs[1].id}] = i;
      kmax = std::max(kmax, i);
    }
    std::set<int> used;
    for (auto &[_, i] : index) used.insert(i);
    if (static_cast<int>(used.size()) != kmax) throw std::invalid_argument("bracket indices are not contiguous");
    for (int x = 0; x < static_cast<int>(g.names.size()); ++x) {
      if (x == g.start) continue;
      const std::string &n = g.names[x];
      int i = std::stoi(n.substr(1));
      if (i < 1 || i > kmax) throw std::invalid_argument("bracket " + n + " has no pair rule");
    }
  } else {
    int next = 1;
    for (int r : canonical_order(g)) {
      const auto &p = g.productions[r];
      if (p.rhs.size() != 2) continue;
      auto key = std::make_pair(p.rhs[0].id, p.rhs[1].id);
      if (!index.count(key)) index[key] = next++;
    }
  }
  DyckGrammar d;
  d.axiom = g.names[g.start];
  d.resize(static_cast<int>(index.size()));
  d.terminals = g.terminals;
  std::vector<int> cfg_to_node(g.names.size(), -1);
  cfg_to_node[g.start] = 0;
  if (node_origin) node_origin->assign(d.nodes(), -1);
  if (node_origin) (*node_origin)[0] = g.start;
  for (auto &[ab, i] : index) {
    cfg_to_node[ab.first] = node_of({i, Side::Left});
    cfg_to_node[ab.second] = node_of({i, Side::Right});
    if (node_origin) {
      (*node_origin)[node_of({i, Side::Left})] = ab.first;
      (*node_origin)[node_of({i, Side::Right})] = ab.second;
    }
  }
  for (const auto &p : g.productions) {
    int x = cfg_to_node[p.lhs];
    if (x < 0) continue;  // nonterminal outside every pair is unreachable
    if (p.rhs.empty()) {
      d.axiom_lambda = true;
    } else if (p.rhs.size() == 1) {
      d.terms[x].insert(p.rhs[0].ch());
    } else {
      d.pairs[x].insert(index.at({p.rhs[0].id, p.rhs[1].id}));
    }
  }
  return d;
}

}  // namespace

DyckGrammar dyck_from_cfg(const Cfg &g) { return build_dyck(g, nullptr); }

bool RenamingMap::is_identity() const {
  std::set<int> seen;
  for (int o : origin)
    if (!seen.insert(o).second) return false;
  return seen.size() == source_names.size();
}

DyckConversion to_dyck_nf(const Cfg &cnf) {
  if (!is_cnf(cnf)) throw std::invalid_argument("to_dyck_nf expects a grammar in Chomsky normal form");
  DyckConversion conv;
  Cfg g = remove_useless(cnf);
  bool start_on_rhs = false;
  for (const auto &p : g.productions)
    for (const Sym &s : p.rhs)
      if (!s.term && s.id == g.start) start_on_rhs = true;
  if (start_on_rhs) {
    int s0 = g.add_nonterminal(g.fresh_name(g.names[g.start] + "0"));
    size_t n = g.productions.size();
    for (size_t i = 0; i < n; ++i)
      if (g.productions[i].lhs == g.start) g.productions.push_back({s0, g.productions[i].rhs});
    g.start = s0;
    conv.log.push_back("fresh axiom " + g.names[s0]);
  }
  conv.source = g;
  std::vector<int> origin(g.names.size());
  for (size_t i = 0; i < origin.size(); ++i) origin[i] = static_cast<int>(i);
  const size_t cap = 10 * g.names.size();
  size_t fresh = 0;
  auto new_nt = [&](const std::string &base, int of) {
    if (++fresh > cap) throw std::runtime_error("substitution cap of " + std::to_string(cap) + " fresh nonterminals exceeded");
    int id = g.add_nonterminal(g.fresh_name(base));
    origin.push_back(origin[of]);
    return id;
  };
  auto copy_rules = [&](int from, int to) {
    size_t n = g.productions.size();
    for (size_t i = 0; i < n; ++i)
      if (g.productions[i].lhs == from) g.productions.push_back({to, g.productions[i].rhs});
  };

  if (!dnf_violations(g).empty()) {
    // Step 1: terminal substitutions
    std::map<int, std::vector<int>> variants;
    int n = static_cast<int>(g.names.size());
    for (int x = 0; x < n; ++x) {
      if (x == g.start) continue;
      std::vector<char> ts;
      bool has_bin = false;
      for (const auto &p : g.productions) {
        if (p.lhs != x) continue;
        if (p.rhs.size() == 1) ts.push_back(p.rhs[0].ch());
        else has_bin = true;
      }
      std::sort(ts.begin(), ts.end());
      if (ts.empty() || (!has_bin && ts.size() == 1)) continue;
      size_t first_moved = has_bin ? 0 : 1;
      variants[x].push_back(x);
      for (size_t j = first_moved; j < ts.size(); ++j) {
        int nt = new_nt(g.names[x] + "_" + terminal_tag(ts[j]), x);
        g.productions.push_back({nt, {Sym::t(ts[j])}});
        std::erase_if(g.productions, [&](const Production &p) {
          return p.lhs == x && p.rhs.size() == 1 && p.rhs[0].ch() == ts[j];
        });
        variants[x].push_back(nt);
        conv.log.push_back("terminal substitution " + g.names[nt] + " -> " + std::string(1, ts[j]));
      }
    }
    if (!variants.empty()) {
      std::vector<Production> out;
      for (const auto &p : g.productions) {
        if (p.rhs.size() != 2) {
          out.push_back(p);
          continue;
        }
        auto va = variants.count(p.rhs[0].id) ? variants[p.rhs[0].id] : std::vector<int>{p.rhs[0].id};
        auto vb = variants.count(p.rhs[1].id) ? variants[p.rhs[1].id] : std::vector<int>{p.rhs[1].id};
        for (int a : va)
          for (int b : vb) out.push_back({p.lhs, {Sym::nt(a), Sym::nt(b)}});
      }
      g.productions = out;
      dedupe(g);
    }

    // Step 2: nonterminals used on both sides keep their left occurrences
    std::set<int> lefts, rights;
    for (const auto &p : g.productions)
      if (p.rhs.size() == 2) {
        lefts.insert(p.rhs[0].id);
        rights.insert(p.rhs[1].id);
      }
    std::vector<int> both;
    for (int a : lefts)
      if (rights.count(a)) both.push_back(a);
    std::sort(both.begin(), both.end(), [&](int a, int b) { return g.names[a] < g.names[b]; });
    for (int a : both) {
      std::map<int, int> sub;  // left neighbour Z -> _ZA
      for (size_t i = 0; i < g.productions.size(); ++i) {
        auto &p = g.productions[i];
        if (p.rhs.size() != 2 || p.rhs[1].id != a) continue;
        int z = p.rhs[0].id;
        if (!sub.count(z)) {
          int nt = new_nt(g.names[a] + "_" + g.names[z], a);
          sub[z] = nt;
          conv.log.push_back("right substitution " + g.names[nt] + " for " + g.names[a] + " after " + g.names[z]);
        }
        g.productions[i].rhs[1] = Sym::nt(sub[z]);
      }
      for (auto &[z, nt] : sub) copy_rules(a, nt);
    }
    dedupe(g);

    // Step 3: give every left and right nonterminal a unique partner
    std::map<int, std::vector<int>> partners_of_left, partners_of_right;
    std::vector<std::pair<int, int>> used_pairs;
    for (int r : canonical_order(g)) {
      const auto &p = g.productions[r];
      if (p.rhs.size() != 2) continue;
      auto ab = std::make_pair(p.rhs[0].id, p.rhs[1].id);
      if (std::find(used_pairs.begin(), used_pairs.end(), ab) != used_pairs.end()) continue;
      used_pairs.push_back(ab);
      partners_of_left[ab.first].push_back(ab.second);
      partners_of_right[ab.second].push_back(ab.first);
    }
    std::map<std::pair<int, int>, std::pair<int, int>> rename;
    std::vector<std::pair<int, int>> copies;  // (original, copy)
    for (auto ab : used_pairs) {
      auto [a, b] = ab;
      int l = a, r = b;
      if (partners_of_left[a].front() != b) {
        l = new_nt(g.names[a] + "_" + g.names[b], a);
        copies.push_back({a, l});
        conv.log.push_back("left substitution " + g.names[l] + " for " + g.names[a] + " before " + g.names[b]);
      }
      if (partners_of_right[b].front() != a) {
        r = new_nt(g.names[b] + "_" + g.names[a], b);
        copies.push_back({b, r});
        conv.log.push_back("right substitution " + g.names[r] + " for " + g.names[b] + " after " + g.names[a]);
      }
      rename[ab] = {l, r};
    }
    for (auto &p : g.productions)
      if (p.rhs.size() == 2) {
        auto lr = rename.at({p.rhs[0].id, p.rhs[1].id});
        p.rhs = {Sym::nt(lr.first), Sym::nt(lr.second)};
      }
    for (auto [from, to] : copies) copy_rules(from, to);
    dedupe(g);
  }

  auto bad = dnf_violations(g);
  if (!bad.empty()) throw std::runtime_error("conversion left condition " + std::to_string(bad[0]) + " unsatisfied");

  // Drop useless symbols while keeping the origin table aligned.
  Cfg pruned = remove_useless(g);
  std::vector<int> pruned_origin(pruned.names.size());
  for (size_t i = 0; i < pruned.names.size(); ++i) pruned_origin[i] = origin[g.find(pruned.names[i])];
  conv.renamed = pruned;
  std::vector<int> node_origin;
  conv.grammar = build_dyck(pruned, &node_origin);
  conv.map.source_names = conv.source.names;
  conv.map.origin.resize(node_origin.size());
  for (size_t x = 0; x < node_origin.size(); ++x)
    conv.map.origin[x] = node_origin[x] < 0 ? -1 : pruned_origin[node_origin[x]];
  return conv;
}

Word replay(const DyckGrammar &g, const Derivation &d) { return replay(g.to_cfg(), d); }

Derivation map_derivation_h_d(const DyckConversion &conv, const Derivation &d) {
  const DyckGrammar &g = conv.grammar;
  replay(g, d);  // validates
  auto rules = g.rules();
  std::map<Production, int> index;
  for (size_t i = 0; i < conv.source.productions.size(); ++i) index.emplace(conv.source.productions[i], static_cast<int>(i));
  auto h = [&](int node) {
    if (node < 0 || node >= static_cast<int>(conv.map.origin.size()) || conv.map.origin[node] < 0)
      throw std::out_of_range("node outside the renaming map");
    return conv.map.origin[node];
  };
  Derivation out;
  for (int r : d) {
    const DyckRule &dr = rules.at(r);
    Production p{h(dr.lhs), {}};
    if (dr.pair) {
      p.rhs = {Sym::nt(h(node_of({dr.pair, Side::Left}))), Sym::nt(h(node_of({dr.pair, Side::Right})))};
    } else if (dr.t) {
      p.rhs = {Sym::t(*dr.t)};
    }
    auto it = index.find(p);
    if (it == index.end()) throw std::out_of_range("image rule " + production_string(conv.source, p) + " missing");
    out.push_back(it->second);
  }
  return out;
}

// ---------------------------------------------------------------- classes, extension

std::string to_string(PairClass c) {
  switch (c) {
    case PairClass::N1: return "N1";
    case PairClass::N2l: return "N2l";
    case PairClass::N2r: return "N2r";
    case PairClass::N3: return "N3";
  }
  return "?";
}

std::vector<int> Classification::members(PairClass c) const {
  std::vector<int> out;
  for (size_t i = 1; i < cls.size(); ++i)
    if (cls[i] == c) out.push_back(static_cast<int>(i));
  return out;
}

Classification classify_pairs(const DyckGrammar &g) {
  Classification c;
  c.cls.assign(g.k + 1, PairClass::N3);
  for (int i = 1; i <= g.k; ++i) {
    bool l = !g.terms[node_of({i, Side::Left})].empty();
    bool r = !g.terms[node_of({i, Side::Right})].empty();
    c.cls[i] = l && r ? PairClass::N1 : l ? PairClass::N2l : r ? PairClass::N2r : PairClass::N3;
  }
  return c;
}

ExtendedDyckGrammar extend_grammar(const DyckGrammar &g) {
  ExtendedDyckGrammar e;
  e.base = g;
  int next = g.k + 1;
  for (char c : g.terms[0]) e.extra.push_back({next++, c});
  if (g.axiom_lambda) e.extra.push_back({next++, std::nullopt});
  e.K = next - 1;
  return e;
}

std::optional<char> ExtendedDyckGrammar::image(Bracket b) const {
  if (b.pair < 1 || b.pair > K) throw std::out_of_range("unknown bracket " + bracket_name(b));
  if (!is_extra(b.pair)) return base.image(b);
  if (b.side == Side::Right) return std::nullopt;
  return extra[b.pair - base.k - 1].t;
}

Cfg ExtendedDyckGrammar::to_cfg() const {
  Cfg g = base.to_cfg();
  std::erase_if(g.productions, [&](const Production &p) { return p.lhs == 0 && p.rhs.size() < 2; });
  if (extra.empty()) return g;
  for (const Extra &e : extra) {
    int l = g.add_nonterminal(bracket_name({e.pair, Side::Left}));
    int r = g.add_nonterminal(bracket_name({e.pair, Side::Right}));
    g.productions.push_back({0, {Sym::nt(l), Sym::nt(r)}});
    g.productions.push_back({l, e.t ? std::vector<Sym>{Sym::t(*e.t)} : std::vector<Sym>{}});
    g.productions.push_back({r, {}});
  }
  return g;
}

Word apply_phi(const ExtendedDyckGrammar &g, const BracketWord &w) {
  Word out;
  for (const Bracket &b : w)
    if (auto c = g.image(b)) out += *c;
  return out;
}

}  // namespace dycknf
