#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "dycknf/grammar.hpp"

namespace dycknf {

// A regex letter: the axiom, a bracket, or a terminal, with an optional label q and repetition mark.
struct Atom {
  enum Kind : std::uint8_t { Axiom, Open, Close, Term };
  Kind kind = Axiom;
  int idx = 0;   // pair index, or the character for Term
  int q = 0;     // 0 = unlabeled
  int mark = 0;  // 0 = unmarked

  static Atom axiom() { return {Axiom, 0}; }
  static Atom open(int i, int q = 0, int mark = 0) { return {Open, i, q, mark}; }
  static Atom close(int i, int q = 0, int mark = 0) { return {Close, i, q, mark}; }
  static Atom of(Bracket b) { return b.side == Side::Left ? open(b.pair) : close(b.pair); }
  static Atom term(char c) { return {Term, static_cast<unsigned char>(c)}; }

  bool is_bracket() const { return kind == Open || kind == Close; }
  Bracket bracket() const { return {idx, kind == Open ? Side::Left : Side::Right}; }
  Atom plain() const { return {kind, idx}; }
  std::string str() const;
  auto operator<=>(const Atom &) const = default;
};

class Regex {
 public:
  enum class Op : std::uint8_t { Empty, Eps, Sym, Cat, Alt, Star, Plus };

  // Smart constructors normalize: flattening, unit/zero absorption, x*x -> x+, {() , x+} -> x*.
  static Regex empty();
  static Regex eps();
  static Regex sym(Atom a);
  static Regex cat(std::vector<Regex> parts);
  static Regex cat(const Regex &a, const Regex &b) { return cat(std::vector<Regex>{a, b}); }
  static Regex alt(std::vector<Regex> parts);
  static Regex alt(const Regex &a, const Regex &b) { return alt(std::vector<Regex>{a, b}); }
  static Regex star(const Regex &r);
  static Regex plus(const Regex &r);
  static Regex word(const std::vector<Atom> &atoms);

  Op op() const;
  const Atom &atom() const;
  const std::vector<Regex> &children() const;

  bool nullable() const;
  int star_height() const;
  int plus_height() const;
  std::size_t size() const;
  Regex reverse() const;
  // Letter-wise substitution.
  Regex map(const std::function<Regex(const Atom &)> &f) const;
  void atoms(std::set<Atom> &out) const;
  std::string str() const;

  std::strong_ordering operator<=>(const Regex &o) const;
  bool operator==(const Regex &o) const { return (*this <=> o) == 0; }

 private:
  struct Node;
  explicit Regex(std::shared_ptr<const Node> n) : n_(std::move(n)) {}
  std::shared_ptr<const Node> n_;
};

// Tokens: S, [n, ]n with optional ^q and ~m suffixes, lowercase letters or 'x' as terminals,
// ( ) | * +, "()" for the empty word and "{}" for the empty set.
Regex parse_regex(std::string_view text);

// Position automaton data.
struct Glushkov {
  std::vector<Atom> pos;
  bool nullable = false;
  std::set<int> first, last;
  std::vector<std::set<int>> follow;
};

Glushkov glushkov(const Regex &r);

}  // namespace dycknf
