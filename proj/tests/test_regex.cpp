#include <gtest/gtest.h>

#include "dycknf/automaton.hpp"
#include "dycknf/regex.hpp"

using namespace dycknf;

namespace {

Regex re(const char *s) { return parse_regex(s); }

std::set<std::string> words(const Regex &r, int n) {
  AtomCodec codec;
  Nfa a = nfa_from_regex(r, codec);
  std::set<std::string> out;
  for (const auto &w : enumerate_words(a, n).words) {
    std::string s;
    for (int l : w) s += codec.at(l).str();
    out.insert(s);
  }
  return out;
}

}  // namespace

TEST(Regex, Normalization) {
  Regex a = Regex::sym(Atom::open(1));
  EXPECT_EQ(Regex::cat(Regex::eps(), a), a);
  EXPECT_EQ(Regex::cat(a, Regex::empty()).op(), Regex::Op::Empty);
  EXPECT_EQ(Regex::alt(a, Regex::empty()), a);
  EXPECT_EQ(Regex::cat(Regex::star(a), a), Regex::plus(a));
  EXPECT_EQ(Regex::alt(Regex::eps(), Regex::plus(a)), Regex::star(a));
  EXPECT_EQ(Regex::cat({a, Regex::cat(a, a)}).children().size(), 3u);
}

TEST(Regex, PrintParseRoundTrip) {
  for (const char *s : {"S(]1([2[3)+]4[5]6)+[7(]5(]3]2)+)+", "]6[2(]7[3)*]7[4", "([1^2~1|]3^4)+", "ab*c", "()"}) {
    Regex r = re(s);
    EXPECT_EQ(parse_regex(r.str()), r) << s;
  }
  EXPECT_THROW(parse_regex("(a"), std::invalid_argument);
}

TEST(Regex, Heights) {
  Regex r = re("(a(b)+)+c*");
  EXPECT_EQ(r.plus_height(), 2);
  EXPECT_EQ(r.star_height(), 1);
  EXPECT_TRUE(re("a*").nullable());
  EXPECT_FALSE(re("a+").nullable());
}

TEST(Regex, ReverseAndMap) {
  EXPECT_EQ(re("ab+c").reverse(), re("cb+a"));
  Regex m = re("ab").map([](const Atom &x) { return x.idx == 'a' ? Regex::eps() : Regex::sym(x); });
  EXPECT_EQ(m, re("b"));
}

TEST(Glushkov, FollowSets) {
  Glushkov g = glushkov(re("(ab)+c"));
  ASSERT_EQ(g.pos.size(), 3u);
  EXPECT_EQ(g.first, (std::set<int>{0}));
  EXPECT_EQ(g.last, (std::set<int>{2}));
  EXPECT_EQ(g.follow[1], (std::set<int>{0, 2}));
}

TEST(Automaton, BoundedEnumeration) {
  EXPECT_EQ(words(re("(ab)+"), 4), (std::set<std::string>{"ab", "abab"}));
  EXPECT_EQ(words(re("a*"), 2), (std::set<std::string>{"", "a", "aa"}));
  EXPECT_TRUE(words(re("{}"), 5).empty());
}

TEST(Automaton, CountsDistinctWords) {
  AtomCodec codec;
  Nfa a = nfa_from_regex(re("(a|b)*a(a|b)(a|b)"), codec);
  EXPECT_EQ(count_words(a, 3), 4u);
  EXPECT_EQ(count_words(a, 5), 16u);
  Nfa amb = nfa_from_regex(re("a*a*"), codec);
  EXPECT_EQ(count_words(amb, 6), 1u);
}

TEST(Automaton, DyckFilter) {
  AtomCodec codec;
  Nfa a = nfa_from_regex(re("([1|]1)*"), codec);
  auto bracket = [&](int l) -> std::optional<std::pair<int, bool>> {
    const Atom &x = codec.at(l);
    return std::make_pair(x.idx, x.kind == Atom::Open);
  };
  auto e = enumerate_dyck_words(a, 6, bracket);
  EXPECT_EQ(e.words.size(), 1u + 1 + 2 + 5);
}

TEST(Automaton, BudgetFlagsIncomplete) {
  AtomCodec codec;
  Nfa a = nfa_from_regex(re("(a|b)*"), codec);
  EXPECT_FALSE(enumerate_words(a, 20, 100).complete);
}
