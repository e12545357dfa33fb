// One PASS/FAIL line per acceptance criterion; exit status 1 if any line fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "support.hpp"

using namespace dycknf;
using namespace dycknf::testing;

namespace {

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string repeat(const std::string &s, int n) {
  std::string out;
  for (int i = 0; i < n; ++i) out += s;
  return out;
}

// (abb)^m aa (d(cb)^n)^m, or with loose set (abb)^+ aa (d(cb)^+)^+
std::set<std::string> lin_words(int max_len, bool loose) {
  std::set<std::string> out;
  std::function<void(const std::string &)> grow = [&](const std::string &w) {
    if (w.back() == 'b' && w.find('d') != std::string::npos) out.insert(w);
    for (int c = 1; static_cast<int>(w.size()) + 1 + 2 * c <= max_len; ++c) grow(w + "d" + repeat("cb", c));
  };
  for (int m = 1; 3 * m + 2 <= max_len; ++m) {
    std::string p = repeat("abb", m) + "aa";
    if (loose) {
      grow(p);
      continue;
    }
    for (int n = 1;; ++n) {
      std::string w = p + repeat("d" + repeat("cb", n), m);
      if (static_cast<int>(w.size()) > max_len) break;
      out.insert(w);
    }
  }
  return out;
}

Outcome expr_conversion() {
  Cfg g = fixture("expr");
  DyckConversion conv = to_dyck_nf(to_cnf(g).first);
  Outcome o;
  std::ostringstream d;
  d << "k=" << conv.grammar.k;
  if (conv.grammar.k != 7) o.ok = false;
  auto ren = pair_renaming(conv.grammar, dyck_from_cfg(parse_grammar(kExprDyck)));
  d << (ren ? " rules match up to renaming" : " rules differ");
  if (!ren) o.ok = false;
  Cfg dg = conv.grammar.to_cfg();
  int bad = 0, words = 0, members = 0;
  for (const auto &w : all_words({'a', '+', '*'}, 8)) {
    bool x = cyk_membership(g, w), y = cyk_membership(dg, w);
    ++words;
    members += x;
    if (x != y) ++bad;
  }
  d << "; cyk agreement " << words - bad << "/" << words << " words (" << members << " members)";
  if (bad) o.ok = false;
  o.detail = d.str();
  return o;
}

Outcome lin_pipeline() {
  Outcome o;
  std::ostringstream d;
  DyckGrammar g = dyck_from_cfg(fixture("lin"));
  auto cls = classify_pairs(g);
  auto dep = build_dependency_graph(g, cls, Atom::axiom());
  auto left = extract_left_regexes(dep);
  Regex want = parse_regex("S(]1([2[3)+]4[5]6)+[7(]5(]3]2)+)+");
  bool same = left.size() == 1 && mirror_extend(left[0], cls) == want;
  d << "mirrored regex " << (same ? "equal" : "differs");
  if (!same) o.ok = false;
  auto ext = extend_grammar(g);
  auto eg = build_extended_graph(g, cls, build_regex_sets(g, cls));
  AtomCodec codec;
  Nfa R = language_nfa(ext, eg.graph, cls, codec);
  auto dr = enumerate_dyck_words(R, 28, bracket_reader(codec));
  auto tl = enumerate_trace_language(ext, 15);
  auto inter = decode_all(codec, dr.words);
  auto traces = trace_set(tl);
  d << "; |D_7∩R|=" << inter.size() << " |traces|=" << traces.size();
  if (!dr.complete || !tl.complete || inter != traces) o.ok = false;
  std::set<std::string> images;
  for (const auto &w : inter) images.insert(apply_phi(ext, w));
  bool closed = images == lin_words(15, false);
  d << "; images " << (closed ? "match" : "differ from") << " the closed form (" << images.size() << " words)";
  if (!closed) o.ok = false;
  o.detail = d.str();
  return o;
}

std::vector<Cfg> random_grammars(int count, std::uint64_t seed0) {
  std::vector<Cfg> out;
  for (int i = 0; i < count; ++i) {
    std::mt19937_64 rng(seed0 + i);
    out.push_back(random_cfg(rng));
  }
  return out;
}

Outcome trace_suite() {
  Outcome o;
  std::vector<Cfg> gs{fixture("lin"), fixture("cf"), fixture("expr")};
  for (auto &g : random_grammars(50, 1000)) gs.push_back(g);
  std::size_t traces = 0, bad = 0, incomplete = 0;
  for (const auto &g : gs) {
    auto ext = extend_grammar(to_dyck_input(g).grammar);
    auto tl = enumerate_trace_language(ext, 8);
    if (!tl.complete) ++incomplete;
    for (const auto &[w, _] : tl.derivations) {
      ++traces;
      if (!dyck_membership(w, ext.K)) ++bad;
    }
  }
  std::mt19937_64 rng(7);
  int disagree = 0, balanced = 0;
  for (int i = 0; i < 10000; ++i) {
    int k = 1 + static_cast<int>(rng() % 3);
    int len = static_cast<int>(rng() % 17);
    BracketWord w;
    if (i % 2 == 0) {
      std::vector<int> stack;
      while (static_cast<int>(w.size()) < len) {
        bool close = !stack.empty() && (rng() % 2 || static_cast<int>(stack.size() + w.size()) >= len);
        if (close) {
          w.push_back({stack.back(), Side::Right});
          stack.pop_back();
        } else {
          int p = 1 + static_cast<int>(rng() % k);
          w.push_back({p, Side::Left});
          stack.push_back(p);
        }
      }
      while (!stack.empty()) w.push_back({stack.back(), Side::Right}), stack.pop_back();
      if (i % 4 == 0 && !w.empty()) {
        auto &b = w[rng() % w.size()];
        b = {1 + static_cast<int>(rng() % k), rng() % 2 ? Side::Left : Side::Right};
      }
    } else {
      for (int j = 0; j < len; ++j) w.push_back({1 + static_cast<int>(rng() % k), rng() % 2 ? Side::Left : Side::Right});
    }
    bool a = dyck_membership(w, k), b = dyck_stack_check(w, k);
    balanced += b;
    if (a != b) ++disagree;
  }
  std::ostringstream d;
  d << gs.size() << " grammars, " << traces << " traces, " << bad << " outside D_K, " << incomplete
    << " incomplete; random strings: " << disagree << "/10000 disagreements (" << balanced << " balanced)";
  o.ok = bad == 0 && incomplete == 0 && disagree == 0;
  o.detail = d.str();
  return o;
}

Outcome cs_suite() {
  Outcome o;
  std::ostringstream d;
  std::vector<std::pair<std::string, int>> runs{{"lin", 8}, {"cf", 8}, {"cf", 16}};
  for (const auto &[name, n] : runs) {
    Pipeline p = run_pipeline(fixture(name));
    Nfa R = p.nfa_R(), Rm = p.nfa_Rm();
    for (auto [nfa, tag] : {std::pair{&R, "R"}, std::pair{&Rm, "R_m"}}) {
      Report r = verify_cs(p.ext, *nfa, p.codec, n, name + "/" + tag);
      if (!r.holds) o.ok = false;
      d << (d.tellp() ? "; " : "") << r.line();
    }
  }
  o.detail = d.str();
  return o;
}

Outcome refinement_suite() {
  Outcome o;
  Pipeline p = run_pipeline(fixture("cf"));
  Nfa R = p.nfa_R(), Rm = p.nfa_Rm();
  auto er = enumerate_words(R, 16), em = enumerate_words(Rm, 16);
  std::size_t outside = 0;
  for (const auto &w : em.words)
    if (!er.words.count(w)) ++outside;
  std::size_t r14 = 0, m14 = 0;
  for (const auto &w : er.words) r14 += w.size() == 14;
  for (const auto &w : em.words) m14 += w.size() == 14;
  std::ostringstream d;
  d << "|R_m|=" << em.words.size() << " |R|=" << er.words.size() << " up to 16, " << outside
    << " R_m words outside R; length 14: R_m " << m14 << " vs R " << r14;
  o.ok = er.complete && em.complete && outside == 0 && m14 < r14;
  o.detail = d.str();
  return o;
}

Outcome lin_approximation() {
  Outcome o;
  Pipeline p = run_pipeline(fixture("lin"));
  auto approx = enumerate_regular(p.approximation, 24);
  auto closed = lin_words(24, true);
  auto lang = language_by_length(p.dyck.grammar.to_cfg(), 24);
  bool contains = true;
  for (const auto &w : lang) contains = contains && approx.count(w);
  bool witness = approx.count("abbaadcbdcb") && !lang.count("abbaadcbdcb");
  std::ostringstream d;
  d << "|L(G_r)|=" << approx.size() << " closed form " << closed.size() << (approx == closed ? " (equal)" : " (differ)")
    << "; |L|=" << lang.size() << (contains ? " contained" : " NOT contained") << "; witness abbaadcbdcb "
    << (witness ? "in G_r only" : "check failed");
  o.ok = approx == closed && contains && witness;
  o.detail = d.str();
  return o;
}

Outcome superset_suite() {
  Outcome o;
  std::ostringstream d;
  for (const std::string name : {"lin", "cf", "expr"}) {
    Pipeline p = run_pipeline(fixture(name));
    Report r = verify_superset(p.dyck.grammar, p.approximation, 20);
    if (!r.holds) o.ok = false;
    d << name << ": " << r.line() << "; ";
  }
  int survivors = 0, tried = 0, failed = 0;
  for (std::uint64_t seed = 5000; survivors < 25 && tried < 1000; ++seed, ++tried) {
    std::mt19937_64 rng(seed);
    Cfg g = random_cfg(rng);
    try {
      Pipeline p = run_pipeline(g);
      Report r = verify_superset(p.dyck.grammar, p.approximation, 20);
      if (language_by_length(p.dyck.grammar.to_cfg(), 20).empty()) continue;
      ++survivors;
      if (!r.holds) ++failed;
    } catch (const std::exception &) {
    }
  }
  d << "random: " << survivors << " survivors of " << tried << " tried, " << failed << " failing";
  if (survivors < 25 || failed) o.ok = false;
  o.detail = d.str();
  return o;
}

Outcome cross_oracle() {
  Outcome o;
  int grammars = 0, words = 0, bad = 0;
  std::size_t members = 0;
  for (int i = 0; i < 50; ++i) {
    std::mt19937_64 rng(9000 + i);
    RandomGrammarParams params;
    params.nonterminals = 2 + i % 4;
    Cfg g = random_cnf(rng, params);
    auto lang = enumerate_language(g, 7);
    members += lang.size();
    ++grammars;
    for (const auto &w : all_words(g.terminals, 7)) {
      ++words;
      if (cyk_membership(g, w) != static_cast<bool>(lang.count(w))) ++bad;
    }
  }
  std::ostringstream d;
  d << grammars << " grammars, " << words << " words, " << members << " members, " << bad << " disagreements";
  o.ok = bad == 0;
  o.detail = d.str();
  return o;
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char *name;
    double limit;
    Outcome (*run)();
  };
  const Criterion all[] = {
      {1, "expr conversion", 5, expr_conversion},
      {2, "lin regex and trace language", 30, lin_pipeline},
      {3, "traces are Dyck words", 60, trace_suite},
      {4, "bracket image and trace identity", 60, cs_suite},
      {5, "refinement narrows R", 30, refinement_suite},
      {6, "lin approximation", 30, lin_approximation},
      {7, "superset property", 120, superset_suite},
      {8, "enumeration agrees with cyk", 60, cross_oracle},
  };
  bool all_ok = true;
  for (const auto &c : all) {
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool ok = o.ok && s < c.limit;
    all_ok = all_ok && ok;
    std::printf("criterion %d %s: %s  %s [%.2fs, limit %.0fs]\n", c.id, c.name, ok ? "PASS" : "FAIL",
                o.detail.c_str(), s, c.limit);
    std::fflush(stdout);
  }
  return all_ok ? 0 : 1;
}
