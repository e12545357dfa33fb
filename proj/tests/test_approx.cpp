#include <gtest/gtest.h>

#include "dycknf/approx.hpp"
#include "support.hpp"

using namespace dycknf;
using namespace dycknf::testing;

namespace {

using Triple = std::tuple<std::string, std::string, std::string>;

std::set<Triple> transitions(const ApproxAutomaton &a) {
  std::set<Triple> out;
  for (const auto &[key, _] : a.rules) {
    auto [u, l, v] = key;
    out.insert({a.names[u], l == Nfa::kEps ? "" : std::string(1, static_cast<char>(l)), a.names[v]});
  }
  return out;
}

std::set<std::string> lin_closed_form(int n) {
  std::set<std::string> out;
  // grow (abb)^+ aa (d(cb)^+)^+ directly
  std::vector<std::string> heads;
  for (std::string p = "abb"; static_cast<int>(p.size()) + 2 <= n; p += "abb") heads.push_back(p + "aa");
  std::vector<std::string> frontier;
  for (const auto &h : heads) frontier.push_back(h);
  while (!frontier.empty()) {
    std::string w = frontier.back();
    frontier.pop_back();
    for (std::string blk = "dcb"; w.size() + blk.size() <= static_cast<size_t>(n); blk += "cb") {
      out.insert(w + blk);
      frontier.push_back(w + blk);
    }
  }
  return out;
}

}  // namespace

TEST(Automaton, LinTransitionDiagram) {
  Pipeline p = run_pipeline(fixture("lin"));
  std::set<Triple> want{
      {"S", "a", "R1Q1"},   {"R1Q1", "b", "R4Q1"}, {"R4Q1", "b", "R6Q1"}, {"R6Q1", "a", "R1Q1"},
      {"R6Q1", "a", "L7Q1"}, {"L7Q1", "a", "R7Q1"}, {"R7Q1", "d", "R5Q1"}, {"R5Q1", "c", "R3Q1"},
      {"R3Q1", "b", "R2Q1"}, {"R2Q1", "c", "R3Q1"}, {"R2Q1", "d", "R5Q1"}, {"R2Q1", "", "F"}};
  EXPECT_EQ(transitions(p.automaton), want);
  EXPECT_EQ(p.automaton.nfa.states(), 10);
}

TEST(Automaton, SingleTerminalPair) {
  Pipeline p = run_pipeline(parse_grammar("start: S\nS -> [1 ]1\n[1 -> 'a'\n]1 -> 'b'\n"));
  EXPECT_EQ(p.automaton.nfa.states(), 4);
  std::set<Triple> want{{"S", "a", "L1Q1"}, {"L1Q1", "b", "R1Q1"}, {"R1Q1", "", "F"}};
  EXPECT_EQ(transitions(p.automaton), want);
  EXPECT_EQ(enumerate_regular(p.approximation, 5), (std::set<std::string>{"ab"}));
}

TEST(Automaton, RuleIdsRecorded) {
  Pipeline p = run_pipeline(fixture("lin"));
  std::set<std::string> ids;
  for (const auto &[_, r] : p.automaton.rules) ids.insert(r.begin(), r.end());
  EXPECT_TRUE(ids.count("1"));
  EXPECT_TRUE(ids.count("10"));
  EXPECT_FALSE(ids.count("0"));
}

TEST(Approximation, LinClosedForm) {
  Pipeline p = run_pipeline(fixture("lin"));
  auto got = enumerate_regular(p.approximation, 24);
  EXPECT_EQ(got, lin_closed_form(24));
  EXPECT_TRUE(got.count("abbaadcbdcb"));
  EXPECT_FALSE(cyk_membership(p.dyck.grammar.to_cfg(), "abbaadcbdcb"));
}

TEST(Approximation, AutomatonAndGrammarAgree) {
  for (const char *name : {"lin", "cf", "expr"}) {
    Pipeline p = run_pipeline(fixture(name));
    for (int n : {8, 12, 16}) EXPECT_EQ(enumerate_regular(p.automaton.nfa, n), enumerate_regular(p.approximation, n)) << name;
  }
}

TEST(Approximation, ImageOfRefinedLanguage) {
  for (const char *name : {"lin", "cf", "expr"}) {
    Pipeline p = run_pipeline(fixture(name));
    Nfa rm = p.nfa_Rm();
    // letter-wise image of the bracket automaton, lambda images as empty moves
    Nfa img = rm;
    for (auto &edges : img.out)
      for (auto &[l, t] : edges) {
        if (l == Nfa::kEps) continue;
        auto c = p.ext.image(p.codec.at(l).bracket());
        l = c ? static_cast<unsigned char>(*c) : Nfa::kEps;
      }
    for (int n : {8, 12, 16}) EXPECT_EQ(enumerate_regular(p.approximation, n), enumerate_regular(img, n)) << name;
  }
}

TEST(Approximation, PrintedGrammarReparses) {
  Pipeline p = run_pipeline(fixture("cf"));
  Cfg c = parse_grammar(p.approximation.to_cfg().to_string());
  EXPECT_EQ(language_fixpoint(c, 16), enumerate_regular(p.approximation, 16));
}

TEST(Approximation, EmptyLanguage) {
  Pipeline p = run_pipeline(parse_grammar("start: S\nS -> [1 ]1\n[1 -> [1 ]1\n]1 -> 'a'\n"));
  EXPECT_TRUE(enumerate_regular(p.approximation, 10).empty());
  EXPECT_TRUE(enumerate_regular(Nfa{}, 10).empty());
}

TEST(Approximation, SupersetOnFixtures) {
  for (const char *name : {"lin", "cf", "expr"}) {
    Pipeline p = run_pipeline(fixture(name));
    Report r = verify_superset(p.dyck.grammar, p.approximation, 16);
    EXPECT_TRUE(r.holds) << r.text();
  }
}

TEST(Export, DotAndJson) {
  Pipeline p = run_pipeline(fixture("lin"));
  std::string dot = automaton_dot(p.automaton);
  EXPECT_NE(dot.find("color=red"), std::string::npos);
  EXPECT_NE(dot.find("color=green"), std::string::npos);
  std::string json = automaton_json(p.automaton);
  EXPECT_NE(json.find("\"start\": \"S\""), std::string::npos);
  EXPECT_EQ(json, automaton_json(run_pipeline(fixture("lin")).automaton));
}
