#include <gtest/gtest.h>

#include <regex>

#include "dycknf/oracle.hpp"
#include "support.hpp"

using namespace dycknf;
using namespace dycknf::testing;

TEST(Cyk, ExprWords) {
  Cfg g = fixture("expr");
  EXPECT_TRUE(cyk_membership(g, "a*a*a+a"));
  EXPECT_FALSE(cyk_membership(g, "a+"));
  EXPECT_TRUE(cyk_membership(g, "a"));
  EXPECT_FALSE(cyk_membership(g, ""));
  EXPECT_THROW(cyk_membership(g, "a-a"), std::invalid_argument);
}

TEST(Cyk, SingleRule) {
  Cfg g = parse_grammar("start: S\nS -> 'a'\n");
  EXPECT_TRUE(cyk_membership(g, "a"));
  EXPECT_FALSE(cyk_membership(g, "aa"));
  EXPECT_THROW(cyk_membership(parse_grammar("start: S\nS -> 'a' 'b' 'c'\n"), "abc"), std::invalid_argument);
}

TEST(Cyk, LambdaOnlyWithStartRule) {
  Cfg g = parse_grammar("start: S\nS -> A B | ''\nA -> 'a'\nB -> 'b'\n");
  EXPECT_TRUE(cyk_membership(g, ""));
  EXPECT_TRUE(cyk_membership(g, "ab"));
}

TEST(Enumerate, LinAtFourteen) {
  auto [cnf, _] = to_cnf(dyck_from_cfg(fixture("lin")).to_cfg());
  auto got = enumerate_language(cnf, 14);
  // (abb)^m aa (d(cb)^n)^m
  std::set<Word> want;
  for (int m = 1; m <= 3; ++m)
    for (int n = 1; n <= 7; ++n) {
      std::string w;
      for (int i = 0; i < m; ++i) w += "abb";
      w += "aa";
      for (int i = 0; i < m; ++i) {
        w += "d";
        for (int j = 0; j < n; ++j) w += "cb";
      }
      if (w.size() <= 14) want.insert(w);
    }
  EXPECT_EQ(got, want);
  EXPECT_EQ(got.size(), 5u);
  EXPECT_TRUE(got.count("abbaadcbcbcbcb"));
  EXPECT_EQ(enumerate_language(dyck_from_cfg(fixture("lin")), 14), got);
}

TEST(Enumerate, UnproductiveStart) {
  Cfg g = parse_grammar("start: S\nS -> S S\nA -> 'a'\n");
  EXPECT_TRUE(enumerate_language(g, 8).empty());
}

TEST(Enumerate, RejectsNonCnf) {
  EXPECT_THROW(enumerate_language(parse_grammar("start: S\nS -> 'a' S | ''\n"), 3), std::invalid_argument);
}

TEST(Enumerate, AgreesWithCykOnRandomCnf) {
  for (int i = 0; i < 50; ++i) {
    std::mt19937_64 rng(700 + i);
    RandomGrammarParams p;
    p.nonterminals = 1 + i % 5;
    Cfg g = random_cnf(rng, p);
    auto lang = enumerate_language(g, 7);
    for (const auto &w : all_words(g.terminals, 7))
      ASSERT_EQ(cyk_membership(g, w), lang.count(w) == 1) << g.to_string() << w;
    EXPECT_EQ(language_by_length(g, 7), lang);
  }
}

TEST(Enumerate, FixpointAgreesOnGeneralGrammars) {
  for (int i = 0; i < 30; ++i) {
    std::mt19937_64 rng(800 + i);
    Cfg g = random_cfg(rng);
    auto [cnf, _] = to_cnf(g);
    EXPECT_EQ(language_fixpoint(g, 6), enumerate_language(cnf, 6)) << g.to_string();
  }
}

TEST(Enumerate, BudgetThrows) {
  Cfg g = parse_grammar("start: S\nS -> S S | 'a' | 'b'\n");
  EXPECT_THROW(language_by_length(g, 12, 100), std::length_error);
}

TEST(Random, Deterministic) {
  std::mt19937_64 a(3), b(3);
  EXPECT_EQ(random_cfg(a).to_string(), random_cfg(b).to_string());
  std::mt19937_64 c(4);
  EXPECT_TRUE(is_cnf(random_cnf(c)));
}

TEST(Report, LineFormat) {
  Report r;
  r.claim = "cs";
  r.bound = 8;
  EXPECT_EQ(r.line(), "claim=cs bound=8 status=holds |diff|=0");
  r.witness("x");
  EXPECT_FALSE(r.holds);
  EXPECT_EQ(r.counterexamples.size(), 1u);
  for (int i = 0; i < 20; ++i) r.witness("y");
  EXPECT_EQ(r.counterexamples.size(), 10u);
  EXPECT_TRUE(std::regex_match(r.line(), std::regex("claim=cs bound=8 status=fails \\|diff\\|=\\d+")));
}

TEST(VerifyCs, HoldsOnFixtures) {
  for (const char *name : {"lin", "cf", "expr"}) {
    Pipeline p = run_pipeline(fixture(name));
    Report a = verify_cs(p.ext, p.nfa_R(), p.codec, 8, "R");
    Report b = verify_cs(p.ext, p.nfa_Rm(), p.codec, 8, "Rm");
    EXPECT_TRUE(a.holds) << a.text();
    EXPECT_TRUE(b.holds) << b.text();
  }
}

TEST(VerifyCs, RegexOverload) {
  DyckGrammar g = dyck_from_cfg(fixture("lin"));
  auto cls = classify_pairs(g);
  auto ext = extend_grammar(g);
  Regex r = regular_language_R(ext, build_extended_graph(g, cls, build_regex_sets(g, cls)));
  EXPECT_TRUE(verify_cs(ext, r, 12).holds);
}

TEST(VerifyCs, MutatedLanguageFails) {
  ExtendedDyckGrammar ext = extend_grammar(dyck_from_cfg(fixture("lin")));
  // final plus dropped: one mirrored block only
  Regex mutated = parse_regex("([1]1([2[3)+[4]4[5[6]6)+[7]7(]5(]3]2)+)");
  Report r = verify_cs(ext, mutated, 15);
  EXPECT_FALSE(r.holds);
  EXPECT_FALSE(r.counterexamples.empty());
  EXPECT_GT(r.diff, 0u);
}

TEST(VerifySuperset, Fixtures) {
  Pipeline lin = run_pipeline(fixture("lin"));
  Report a = verify_superset(lin.dyck.grammar, lin.approximation, 20);
  EXPECT_TRUE(a.holds);
  EXPECT_GT(a.diff, 0u);
  Pipeline cf = run_pipeline(fixture("cf"));
  EXPECT_TRUE(verify_superset(cf.dyck.grammar, cf.approximation, 14).holds);
}

TEST(VerifySuperset, FiniteLanguageIsExact) {
  Pipeline p = run_pipeline(parse_grammar("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'\n"));
  Report r = verify_superset(p.dyck.grammar, p.approximation, 10);
  EXPECT_TRUE(r.holds);
  EXPECT_EQ(r.diff, 0u);
}

TEST(VerifySuperset, DetectsMissingWords) {
  Pipeline p = run_pipeline(fixture("lin"));
  RegularGrammar empty = p.approximation;
  empty.rules.clear();
  Report r = verify_superset(p.dyck.grammar, empty, 10);
  EXPECT_FALSE(r.holds);
}

TEST(VerifyDycknf, Fixtures) {
  for (const char *name : {"lin", "cf", "expr"}) {
    Report r = verify_dycknf(fixture(name), 8, 1);
    EXPECT_TRUE(r.holds) << r.text();
  }
}
