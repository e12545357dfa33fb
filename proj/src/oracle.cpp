#include "dycknf/oracle.hpp"

#include <chrono>
#include <deque>
#include <sstream>
#include <stdexcept>

#include "dycknf/dyck.hpp"

namespace dycknf {

namespace {

void require_cnf(const Cfg &g) {
  if (!is_cnf(g)) throw std::invalid_argument("grammar is not in Chomsky normal form");
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

}  // namespace

bool cyk_membership(const Cfg &g, const Word &w) {
  require_cnf(g);
  for (char c : w)
    if (!g.terminals.count(c)) throw std::invalid_argument(std::string("foreign letter '") + c + "'");
  int n = static_cast<int>(w.size());
  if (n == 0) {
    for (const auto &p : g.productions)
      if (p.lhs == g.start && p.rhs.empty()) return true;
    return false;
  }
  int N = static_cast<int>(g.names.size());
  // V[i][len-1] = nonterminals deriving w[i, i+len)
  std::vector<std::vector<std::vector<char>>> V(n, std::vector<std::vector<char>>(n, std::vector<char>(N, 0)));
  for (int i = 0; i < n; ++i)
    for (const auto &p : g.productions)
      if (p.rhs.size() == 1 && p.rhs[0].ch() == w[i]) V[i][0][p.lhs] = 1;
  for (int len = 2; len <= n; ++len)
    for (int i = 0; i + len <= n; ++i)
      for (int s = 1; s < len; ++s)
        for (const auto &p : g.productions)
          if (p.rhs.size() == 2 && V[i][s - 1][p.rhs[0].id] && V[i + s][len - s - 1][p.rhs[1].id])
            V[i][len - 1][p.lhs] = 1;
  return V[0][n - 1][g.start];
}

std::set<Word> enumerate_language(const Cfg &g, int max_len) {
  require_cnf(g);
  std::set<Word> out;
  if (max_len < 0) return out;
  auto by = g.rules_by_lhs();
  using Form = std::pair<Word, std::vector<int>>;  // terminal prefix, pending nonterminals (leftmost first)
  std::set<Form> seen;
  std::deque<Form> queue;
  queue.push_back({"", {g.start}});
  while (!queue.empty()) {
    Form f = std::move(queue.front());
    queue.pop_front();
    if (f.second.empty()) {
      out.insert(f.first);
      continue;
    }
    int a = f.second.front();
    for (int r : by[a]) {
      const Production &p = g.productions[r];
      Form nf{f.first, {}};
      if (p.rhs.size() == 1) nf.first += p.rhs[0].ch();
      else
        for (const Sym &s : p.rhs) nf.second.push_back(s.id);
      nf.second.insert(nf.second.end(), f.second.begin() + 1, f.second.end());
      if (static_cast<int>(nf.first.size() + nf.second.size()) > max_len) continue;
      if (seen.insert(nf).second) queue.push_back(std::move(nf));
    }
  }
  return out;
}

std::set<Word> enumerate_language(const DyckGrammar &g, int max_len) { return enumerate_language(g.to_cfg(), max_len); }

std::set<Word> language_by_length(const Cfg &g, int max_len, std::size_t budget) {
  require_cnf(g);
  std::set<Word> out;
  if (max_len < 0) return out;
  int N = static_cast<int>(g.names.size());
  std::vector<std::vector<std::set<Word>>> W(N, std::vector<std::set<Word>>(max_len + 1));
  std::size_t total = 0;
  for (const auto &p : g.productions) {
    if (p.rhs.empty() && p.lhs == g.start) out.insert("");
    if (p.rhs.size() == 1 && max_len >= 1) W[p.lhs][1].insert(std::string(1, p.rhs[0].ch()));
  }
  for (int len = 2; len <= max_len; ++len)
    for (const auto &p : g.productions) {
      if (p.rhs.size() != 2) continue;
      auto &dst = W[p.lhs][len];
      for (int s = 1; s < len; ++s)
        for (const auto &x : W[p.rhs[0].id][s])
          for (const auto &y : W[p.rhs[1].id][len - s]) {
            if (dst.insert(x + y).second && ++total > budget)
              throw std::length_error("word budget exhausted at length " + std::to_string(len));
          }
    }
  for (int len = 1; len <= max_len; ++len) out.insert(W[g.start][len].begin(), W[g.start][len].end());
  return out;
}

std::set<Word> language_fixpoint(const Cfg &g, int max_len) {
  int N = static_cast<int>(g.names.size());
  std::vector<std::set<Word>> W(N);
  if (max_len < 0) return {};
  for (bool changed = true; changed;) {
    changed = false;
    for (const auto &p : g.productions) {
      std::set<Word> acc{""};
      for (const Sym &s : p.rhs) {
        std::set<Word> next;
        if (s.term) {
          for (const auto &x : acc)
            if (static_cast<int>(x.size()) < max_len) next.insert(x + s.ch());
        } else {
          for (const auto &x : acc)
            for (const auto &y : W[s.id])
              if (static_cast<int>(x.size() + y.size()) <= max_len) next.insert(x + y);
        }
        acc = std::move(next);
        if (acc.empty()) break;
      }
      for (auto &x : acc)
        if (W[p.lhs].insert(x).second) changed = true;
    }
  }
  return W[g.start];
}

std::vector<Word> all_words(const std::set<char> &alphabet, int max_len) {
  std::vector<Word> out{""};
  std::size_t from = 0;
  for (int len = 1; len <= max_len; ++len) {
    std::size_t to = out.size();
    for (std::size_t i = from; i < to; ++i)
      for (char c : alphabet) out.push_back(out[i] + c);
    from = to;
  }
  return out;
}

namespace {

std::string nt_name(int i) { return i == 0 ? "S" : std::string(1, static_cast<char>('A' + i - 1)); }

}  // namespace

Cfg random_cfg(std::mt19937_64 &rng, const RandomGrammarParams &p) {
  Cfg g;
  for (int i = 0; i < p.nonterminals; ++i) g.names.push_back(nt_name(i));
  for (int i = 0; i < p.terminals; ++i) g.terminals.insert(static_cast<char>('a' + i));
  std::uniform_int_distribution<int> rules(1, p.max_rules), len(1, p.max_rhs), nt(0, p.nonterminals - 1),
      t(0, p.terminals - 1);
  std::bernoulli_distribution lam(p.lambda), is_t(0.5);
  for (int a = 0; a < p.nonterminals; ++a) {
    int r = rules(rng);
    // one rule that only emits letters keeps most nonterminals generating
    Production base{a, {}};
    for (int k = len(rng); k > 0; --k) base.rhs.push_back(Sym::t(static_cast<char>('a' + t(rng))));
    g.productions.push_back(base);
    for (int i = 1; i < r; ++i) {
      Production q{a, {}};
      if (!lam(rng))
        for (int k = len(rng); k > 0; --k)
          q.rhs.push_back(is_t(rng) ? Sym::t(static_cast<char>('a' + t(rng))) : Sym::nt(nt(rng)));
      g.productions.push_back(q);
    }
  }
  return g;
}

Cfg random_cnf(std::mt19937_64 &rng, const RandomGrammarParams &p) {
  Cfg g;
  for (int i = 0; i < p.nonterminals; ++i) g.names.push_back(nt_name(i));
  for (int i = 0; i < p.terminals; ++i) g.terminals.insert(static_cast<char>('a' + i));
  std::uniform_int_distribution<int> rules(1, p.max_rules), nt(0, p.nonterminals - 1), t(0, p.terminals - 1);
  std::bernoulli_distribution is_t(0.35);
  for (int a = 0; a < p.nonterminals; ++a) {
    int r = rules(rng);
    for (int i = 0; i < r; ++i) {
      if (is_t(rng)) g.productions.push_back({a, {Sym::t(static_cast<char>('a' + t(rng)))}});
      else g.productions.push_back({a, {Sym::nt(nt(rng)), Sym::nt(nt(rng))}});
    }
  }
  std::sort(g.productions.begin(), g.productions.end());
  g.productions.erase(std::unique(g.productions.begin(), g.productions.end()), g.productions.end());
  return g;
}

void Report::witness(const std::string &w) {
  holds = false;
  if (counterexamples.size() < 10) counterexamples.push_back(w);
}

std::string Report::line() const {
  return "claim=" + claim + " bound=" + std::to_string(bound) + " status=" + (holds ? "holds" : "fails") +
         " |diff|=" + std::to_string(diff);
}

std::string Report::text() const {
  std::ostringstream os;
  os << line() << "\n";
  for (const auto &n : notes) os << "  " << n << "\n";
  for (const auto &c : counterexamples) os << "  counterexample: " << c << "\n";
  os << "  time: " << seconds << "s\n";
  return os.str();
}

namespace {

std::string show(const Word &w) { return w.empty() ? "''" : w; }

}  // namespace

Report verify_cs(const ExtendedDyckGrammar &g, const Nfa &r, const AtomCodec &codec, int n, const std::string &claim) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.claim = claim;
  rep.bound = n;
  auto bracket = [&](int l) -> std::optional<std::pair<int, bool>> {
    if (l < 0 || l >= static_cast<int>(codec.size())) return std::nullopt;
    const Atom &a = codec.at(l);
    if (!a.is_bracket() || a.idx < 1 || a.idx > g.K) return std::nullopt;
    return std::make_pair(a.idx, a.kind == Atom::Open);
  };
  auto dr = enumerate_dyck_words(r, 2 * n, bracket);
  if (!dr.complete) {
    rep.notes.push_back("bracket enumeration budget exhausted");
    rep.holds = false;
  }
  std::set<BracketWord> inter;
  std::set<Word> images;
  for (const auto &w : dr.words) {
    BracketWord b;
    for (int l : w) b.push_back(codec.at(l).bracket());
    if (!dyck_membership(b, g.K)) rep.witness("enumerated word outside D_K: " + to_string(b));
    Word x = apply_phi(g, b);
    if (static_cast<int>(x.size()) > n) continue;
    inter.insert(b);
    images.insert(x);
  }
  std::set<Word> lang = language_by_length(g.base.to_cfg(), n);
  for (const auto &w : images)
    if (!lang.count(w)) {
      ++rep.diff;
      rep.witness("image not in L: " + show(w));
    }
  for (const auto &w : lang)
    if (!images.count(w)) {
      ++rep.diff;
      rep.witness("word of L without a bracket preimage: " + show(w));
    }
  auto traces = enumerate_trace_language(g, n);
  if (!traces.complete) {
    rep.notes.push_back("trace enumeration budget exhausted");
    rep.holds = false;
  }
  for (const auto &[t, _] : traces.derivations)
    if (!inter.count(t)) {
      ++rep.diff;
      rep.witness("trace missing from D_K ∩ R: " + to_string(t));
    }
  for (const auto &w : inter)
    if (!traces.derivations.count(w)) {
      ++rep.diff;
      rep.witness("D_K ∩ R word that is no trace: " + to_string(w));
    }
  rep.notes.push_back("|L|=" + std::to_string(lang.size()) + " |D_K∩R|=" + std::to_string(inter.size()) +
                      " |traces|=" + std::to_string(traces.derivations.size()));
  rep.seconds = since(t0);
  return rep;
}

Report verify_cs(const ExtendedDyckGrammar &g, const Regex &r, int n, const std::string &claim) {
  AtomCodec codec;
  Nfa a = nfa_from_regex(r, codec);
  return verify_cs(g, a, codec, n, claim);
}

Report verify_superset(const DyckGrammar &g, const RegularGrammar &gr, int n) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.claim = "superset";
  rep.bound = n;
  std::set<Word> lang = language_by_length(g.to_cfg(), n);
  Nfa a = gr.to_nfa();
  for (const auto &w : lang)
    if (!a.accepts(to_letters(w))) {
      ++rep.diff;
      rep.witness("missing from the approximation: " + show(w));
    }
  if (rep.holds) {
    std::uint64_t total = 0;
    for (int m = 0; m <= n; ++m) total += count_words(a, m);
    rep.diff = total - lang.size();
    rep.notes.push_back("|L|=" + std::to_string(lang.size()) + " |L(G_r)|=" + std::to_string(total));
  }
  rep.seconds = since(t0);
  return rep;
}

namespace {

// Random complete leftmost derivation of at most max_steps steps, or empty on failure.
Derivation random_derivation(const Cfg &g, std::mt19937_64 &rng, int max_steps) {
  auto by = g.rules_by_lhs();
  std::vector<int> pending{g.start};
  Derivation d;
  while (!pending.empty()) {
    if (static_cast<int>(d.size()) >= max_steps) return {};
    int a = pending.front();
    pending.erase(pending.begin());
    const auto &opts = by[a];
    if (opts.empty()) return {};
    // prefer closing rules once the budget runs low
    std::vector<int> shortlist;
    if (static_cast<int>(d.size() + pending.size()) + 3 >= max_steps)
      for (int r : opts)
        if (g.productions[r].rhs.size() <= 1) shortlist.push_back(r);
    const auto &pool = shortlist.empty() ? opts : shortlist;
    int r = pool[std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(rng)];
    d.push_back(r);
    std::vector<int> nts;
    for (const Sym &s : g.productions[r].rhs)
      if (!s.term) nts.push_back(s.id);
    pending.insert(pending.begin(), nts.begin(), nts.end());
  }
  return d;
}

void compare(Report &rep, const std::set<Word> &want, const std::set<Word> &got, const std::string &what) {
  for (const auto &w : want)
    if (!got.count(w)) {
      ++rep.diff;
      rep.witness(what + " lacks " + show(w));
    }
  for (const auto &w : got)
    if (!want.count(w)) {
      ++rep.diff;
      rep.witness(what + " adds " + show(w));
    }
}

}  // namespace

Report verify_dycknf(const Cfg &g, int n, std::uint64_t seed) {
  auto t0 = std::chrono::steady_clock::now();
  Report rep;
  rep.claim = "dycknf";
  rep.bound = n;
  std::set<Word> lang = language_fixpoint(g, n);
  auto [cnf, cr] = to_cnf(g);
  if (!is_cnf(cnf)) rep.witness("CNF conversion output is not in CNF");
  compare(rep, lang, language_by_length(cnf, n), "CNF grammar");
  DyckConversion conv = to_dyck_nf(cnf);
  for (int c : dnf_violations(conv.grammar.to_cfg())) rep.witness("normal form condition " + std::to_string(c) + " violated");
  compare(rep, lang, language_by_length(conv.grammar.to_cfg(), n), "Dyck grammar");
  std::mt19937_64 rng(seed);
  Cfg dg = conv.grammar.to_cfg();
  int replayed = 0;
  for (int i = 0; i < 200; ++i) {
    Derivation d = random_derivation(dg, rng, 15);
    if (d.empty()) continue;
    Word w = replay(dg, d);
    try {
      Word back = replay(conv.source, map_derivation_h_d(conv, d));
      if (back != w) rep.witness("h_d image derives " + show(back) + " instead of " + show(w));
    } catch (const std::exception &e) {
      rep.witness(std::string("h_d image does not replay: ") + e.what());
    }
    ++replayed;
  }
  rep.notes.push_back("|L|=" + std::to_string(lang.size()) + " k=" + std::to_string(conv.grammar.k) +
                      " replayed derivations=" + std::to_string(replayed));
  rep.seconds = since(t0);
  return rep;
}

}  // namespace dycknf
