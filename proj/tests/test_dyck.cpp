#include <gtest/gtest.h>

#include <random>

#include "dycknf/dyck.hpp"
#include "dycknf/oracle.hpp"
#include "support.hpp"

using namespace dycknf;
using namespace dycknf::testing;

namespace {

BracketWord b(const char *s) { return parse_brackets(s); }

// index of lhs -> rhs in c, rhs given as names and quoted letters
int rule(const Cfg &c, const std::string &lhs, const std::vector<std::string> &rhs) {
  for (size_t i = 0; i < c.productions.size(); ++i) {
    const Production &p = c.productions[i];
    if (c.names[p.lhs] != lhs || p.rhs.size() != rhs.size()) continue;
    bool ok = true;
    for (size_t j = 0; j < rhs.size(); ++j) {
      const Sym &s = p.rhs[j];
      std::string got = s.term ? std::string(1, s.ch()) : c.names[s.id];
      ok = ok && got == rhs[j];
    }
    if (ok) return static_cast<int>(i);
  }
  throw std::invalid_argument("no rule " + lhs);
}

// leftmost derivation of a*a*a+a in the reference numbering
Derivation expr_derivation(const Cfg &c) {
  return {rule(c, "E0", {"[2", "]2"}), rule(c, "[2", {"[1", "]1"}), rule(c, "[1", {"[4", "]4"}),
          rule(c, "[4", {"a"}),        rule(c, "]4", {"[7", "]7"}), rule(c, "[7", {"*"}),
          rule(c, "]7", {"a"}),        rule(c, "]1", {"[7", "]7"}), rule(c, "[7", {"*"}),
          rule(c, "]7", {"a"}),        rule(c, "]2", {"[6", "]6"}), rule(c, "[6", {"+"}),
          rule(c, "]6", {"a"})};
}

}  // namespace

TEST(Brackets, ParseAndPrint) {
  BracketWord w = b("[1 ]1 [12 ]12");
  ASSERT_EQ(w.size(), 4u);
  EXPECT_EQ(w[2].pair, 12);
  EXPECT_EQ(to_string(w), "[1 ]1 [12 ]12");
  EXPECT_THROW(parse_brackets("[x"), std::invalid_argument);
}

TEST(Balanced, SinglePair) {
  EXPECT_TRUE(is_balanced(b("[1 ]1")));
  EXPECT_FALSE(is_balanced(b("]1 [1")));
  EXPECT_TRUE(is_balanced(b("[1 [1 ]1 ]1")));
  EXPECT_TRUE(is_balanced({}));
  EXPECT_THROW(is_balanced(b("[1 ]2")), std::invalid_argument);
}

TEST(PairClassify, NestedMatched) {
  PairKind k = pair_classify(b("[1 [2 ]2 ]1"), 1, 4);
  EXPECT_TRUE(k.matched);
  EXPECT_TRUE(k.nested);
  EXPECT_FALSE(k.reducible);
}

TEST(PairClassify, Reducible) {
  PairKind k = pair_classify(b("[1 ]1 [2 ]2"), 1, 4);
  EXPECT_TRUE(k.matched);
  EXPECT_TRUE(k.reducible);
  EXPECT_FALSE(k.nested);
}

TEST(PairClassify, Unmatched) {
  EXPECT_FALSE(pair_classify(b("[1 [2 ]2 ]1"), 2, 4).matched);
  EXPECT_THROW(pair_classify(b("[1 ]1"), 1, 3), std::out_of_range);
}

TEST(Membership, Examples) {
  EXPECT_TRUE(dyck_membership(b("[2 [1 [4 ]4 [7 ]7 ]1 [7 ]7 ]2 [6 ]6"), 7));
  EXPECT_FALSE(dyck_membership(b("[1 ]2"), 2));
  EXPECT_TRUE(dyck_membership({}, 1));
  EXPECT_FALSE(dyck_membership(b("[3 ]3"), 2));
}

TEST(Membership, AgreesWithStackChecker) {
  std::mt19937_64 rng(42);
  int balanced = 0;
  for (int i = 0; i < 10000; ++i) {
    int k = 1 + static_cast<int>(rng() % 3);
    int len = static_cast<int>(rng() % 21);
    BracketWord w;
    if (i % 2) {
      for (int j = 0; j < len; ++j)
        w.push_back({1 + static_cast<int>(rng() % k), rng() % 2 ? Side::Left : Side::Right});
    } else {
      std::vector<int> st;
      for (int j = 0; j < len / 2; ++j) {
        if (!st.empty() && rng() % 2) {
          w.push_back({st.back(), Side::Right});
          st.pop_back();
        } else {
          st.push_back(1 + static_cast<int>(rng() % k));
          w.push_back({st.back(), Side::Left});
        }
      }
      while (!st.empty()) w.push_back({st.back(), Side::Right}), st.pop_back();
      if (i % 6 == 0 && !w.empty()) std::swap(w[rng() % w.size()], w[rng() % w.size()]);
    }
    bool want = dyck_stack_check(w, k);
    balanced += want;
    ASSERT_EQ(dyck_membership(w, k), want) << to_string(w);
  }
  EXPECT_GT(balanced, 3000);
}

TEST(Trace, ExprDerivation) {
  Cfg c = parse_grammar(kExprDyck);
  Derivation d = expr_derivation(c);
  EXPECT_EQ(replay(c, d), "a*a*a+a");
  TraceWord t = trace_word(c, d);
  EXPECT_EQ(to_string(t.brackets), "[2 [1 [4 ]4 [7 ]7 ]1 [7 ]7 ]2 [6 ]6");
  EXPECT_EQ(t.source, "a*a*a+a");
  EXPECT_EQ(t.brackets.size(), 2 * t.source.size() - 2);
  EXPECT_TRUE(dyck_membership(t.brackets, 7));
}

TEST(Trace, SpansCoverSubtrees) {
  Cfg c = parse_grammar(kExprDyck);
  Derivation d = expr_derivation(c);
  BracketWord t = trace_word(c, d).brackets;
  for (auto [i, j] : pair_spans(c, d)) {
    BracketWord sub(t.begin() + i - 1, t.begin() + j);
    EXPECT_TRUE(dyck_stack_check(sub, 7)) << i << "," << j;
    EXPECT_EQ(t[i - 1].side, Side::Left);
  }
}

TEST(Trace, ExtraPairWord) {
  ExtendedDyckGrammar e = extend_grammar(dyck_from_cfg(parse_grammar(kExprDyck)));
  auto tl = enumerate_trace_language(e, 1);
  std::set<BracketWord> want{b("[8 ]8")};
  EXPECT_EQ(trace_set(tl), want);
}

TEST(Trace, LengthRelation) {
  for (const char *name : {"lin", "cf", "expr"}) {
    ExtendedDyckGrammar e = extend_grammar(to_dyck_input(fixture(name)).grammar);
    auto tl = enumerate_trace_language(e, 12);
    ASSERT_TRUE(tl.complete);
    for (const auto &[t, _] : tl.derivations) {
      Word w = apply_phi(e, t);
      bool extra = t.size() == 2 && e.is_extra(t[0].pair);
      if (!extra) {
        EXPECT_EQ(t.size(), 2 * w.size() - 2) << to_string(t);
      }
      EXPECT_TRUE(dyck_membership(t, e.K));
    }
  }
}

TEST(Trace, LinPattern) {
  ExtendedDyckGrammar e = extend_grammar(dyck_from_cfg(fixture("lin")));
  auto tl = enumerate_trace_language(e, 14);
  std::set<BracketWord> want;
  for (int m = 1; m <= 2; ++m)
    for (int n = 1; n <= 4; ++n) {
      std::string s;
      for (int i = 0; i < m; ++i) {
        s += " [1 ]1";
        for (int j = 0; j < n; ++j) s += " [2 [3";
        s += " [4 ]4 [5 [6 ]6";
      }
      s += " [7 ]7";
      for (int i = 0; i < m; ++i) {
        s += " ]5";
        for (int j = 0; j < n; ++j) s += " ]3 ]2";
      }
      BracketWord w = b(s.c_str());
      if (apply_phi(e, w).size() <= 14) want.insert(w);
    }
  EXPECT_EQ(trace_set(tl), want);
  EXPECT_EQ(want.size(), 5u);
}

TEST(Trace, SingleCoreSegmentInLinTraces) {
  ExtendedDyckGrammar e = extend_grammar(dyck_from_cfg(fixture("lin")));
  for (const auto &[t, _] : enumerate_trace_language(e, 16).derivations) {
    int cores = 0;
    for (size_t i = 0; i + 1 < t.size(); ++i) cores += t[i].pair == 7 && t[i].side == Side::Left;
    EXPECT_EQ(cores, 1);
  }
}

TEST(Trace, EmptyLanguage) {
  Cfg c = parse_grammar("start: S\nS -> [1 ]1\n[1 -> [1 ]1\n]1 -> 'a'\n");
  auto tl = enumerate_trace_language(extend_grammar(dyck_from_cfg(c)), 10);
  EXPECT_TRUE(tl.derivations.empty());
}
