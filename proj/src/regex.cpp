#include "dycknf/regex.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace dycknf {

std::string Atom::str() const {
  std::string s;
  switch (kind) {
    case Axiom: s = "S"; break;
    case Open: s = "[" + std::to_string(idx); break;
    case Close: s = "]" + std::to_string(idx); break;
    case Term: {
      char c = static_cast<char>(idx);
      if (c >= 'a' && c <= 'z') s = std::string(1, c);
      else s = std::string("'") + c + "'";
      break;
    }
  }
  if (q) s += "^" + std::to_string(q);
  if (mark) s += "~" + std::to_string(mark);
  return s;
}

struct Regex::Node {
  Op op;
  Atom atom;
  std::vector<Regex> kids;
  bool nullable = false;
  std::size_t size = 1;
};

namespace {

using Op = Regex::Op;

}  // namespace

Regex::Op Regex::op() const { return n_->op; }
const Atom &Regex::atom() const { return n_->atom; }
const std::vector<Regex> &Regex::children() const { return n_->kids; }
bool Regex::nullable() const { return n_->nullable; }
std::size_t Regex::size() const { return n_->size; }

Regex Regex::empty() {
  static const Regex r(std::make_shared<Node>(Node{Op::Empty, {}, {}, false, 1}));
  return r;
}

Regex Regex::eps() {
  static const Regex r(std::make_shared<Node>(Node{Op::Eps, {}, {}, true, 1}));
  return r;
}

Regex Regex::sym(Atom a) { return Regex(std::make_shared<Node>(Node{Op::Sym, a, {}, false, 1})); }

namespace {

std::size_t total_size(const std::vector<Regex> &v) {
  std::size_t s = 1;
  for (const auto &r : v) s += r.size();
  return s;
}

}  // namespace

Regex Regex::cat(std::vector<Regex> parts) {
  std::vector<Regex> flat;
  for (auto &p : parts) {
    if (p.op() == Op::Empty) return empty();
    if (p.op() == Op::Eps) continue;
    if (p.op() == Op::Cat) flat.insert(flat.end(), p.children().begin(), p.children().end());
    else flat.push_back(p);
  }
  auto seq_of = [](const Regex &y) { return y.op() == Op::Cat ? y.children() : std::vector<Regex>{y}; };
  auto closure_body = [](const Regex &r) -> const Regex * {
    return (r.op() == Op::Star || r.op() == Op::Plus) ? &r.children()[0] : nullptr;
  };
  for (bool changed = true; changed;) {
    changed = false;
    for (size_t i = 0; i < flat.size() && !changed; ++i) {
      // adjacent closures of the same body
      if (i + 1 < flat.size()) {
        const Regex *a = closure_body(flat[i]), *b = closure_body(flat[i + 1]);
        if (a && b && *a == *b) {
          bool any_plus = flat[i].op() == Op::Plus || flat[i + 1].op() == Op::Plus;
          Regex body = *a;
          Regex merged = any_plus ? plus(body) : star(body);
          flat.erase(flat.begin() + i, flat.begin() + i + 2);
          flat.insert(flat.begin() + i, merged);
          changed = true;
          break;
        }
      }
      if (flat[i].op() != Op::Star) continue;
      Regex y = flat[i].children()[0];
      auto seq = seq_of(y);
      size_t m = seq.size();
      if (i + 1 + m <= flat.size() &&
          std::equal(seq.begin(), seq.end(), flat.begin() + i + 1)) {
        flat.erase(flat.begin() + i, flat.begin() + i + 1 + m);
        flat.insert(flat.begin() + i, plus(y));
        changed = true;
      } else if (i >= m && std::equal(seq.begin(), seq.end(), flat.begin() + (i - m))) {
        flat.erase(flat.begin() + (i - m), flat.begin() + i + 1);
        flat.insert(flat.begin() + (i - m), plus(y));
        changed = true;
      }
    }
  }
  if (flat.empty()) return eps();
  if (flat.size() == 1) return flat[0];
  bool nul = std::all_of(flat.begin(), flat.end(), [](const Regex &r) { return r.nullable(); });
  std::size_t sz = total_size(flat);
  return Regex(std::make_shared<Node>(Node{Op::Cat, {}, std::move(flat), nul, sz}));
}

Regex Regex::alt(std::vector<Regex> parts) {
  std::vector<Regex> flat;
  for (auto &p : parts) {
    if (p.op() == Op::Empty) continue;
    if (p.op() == Op::Alt) flat.insert(flat.end(), p.children().begin(), p.children().end());
    else flat.push_back(p);
  }
  std::sort(flat.begin(), flat.end());
  flat.erase(std::unique(flat.begin(), flat.end()), flat.end());
  auto e = std::find_if(flat.begin(), flat.end(), [](const Regex &r) { return r.op() == Op::Eps; });
  if (e != flat.end() && flat.size() > 1) {
    flat.erase(e);
    auto p = std::find_if(flat.begin(), flat.end(), [](const Regex &r) { return r.op() == Op::Plus; });
    bool other_nullable = std::any_of(flat.begin(), flat.end(), [](const Regex &r) { return r.nullable(); });
    if (p != flat.end() && !other_nullable) {
      *p = star(p->children()[0]);
    } else if (!other_nullable) {
      flat.push_back(eps());
    }
    std::sort(flat.begin(), flat.end());
  }
  if (flat.empty()) return empty();
  if (flat.size() == 1) return flat[0];
  bool nul = std::any_of(flat.begin(), flat.end(), [](const Regex &r) { return r.nullable(); });
  std::size_t sz = total_size(flat);
  return Regex(std::make_shared<Node>(Node{Op::Alt, {}, std::move(flat), nul, sz}));
}

Regex Regex::star(const Regex &r) {
  switch (r.op()) {
    case Op::Empty:
    case Op::Eps: return eps();
    case Op::Star: return r;
    case Op::Plus: return star(r.children()[0]);
    case Op::Alt: {
      std::vector<Regex> rest;
      for (const auto &c : r.children())
        if (c.op() != Op::Eps) rest.push_back(c);
      if (rest.size() != r.children().size()) return star(alt(rest));
      break;
    }
    default: break;
  }
  return Regex(std::make_shared<Node>(Node{Op::Star, {}, {r}, true, r.size() + 1}));
}

Regex Regex::plus(const Regex &r) {
  switch (r.op()) {
    case Op::Empty: return empty();
    case Op::Eps: return eps();
    case Op::Plus:
    case Op::Star: return r;
    default: break;
  }
  return Regex(std::make_shared<Node>(Node{Op::Plus, {}, {r}, r.nullable(), r.size() + 1}));
}

Regex Regex::word(const std::vector<Atom> &atoms) {
  std::vector<Regex> v;
  for (const Atom &a : atoms) v.push_back(sym(a));
  return cat(v);
}

int Regex::star_height() const {
  int h = 0;
  for (const auto &c : children()) h = std::max(h, c.star_height());
  return h + (op() == Op::Star ? 1 : 0);
}

int Regex::plus_height() const {
  int h = 0;
  for (const auto &c : children()) h = std::max(h, c.plus_height());
  return h + (op() == Op::Plus ? 1 : 0);
}

Regex Regex::reverse() const {
  switch (op()) {
    case Op::Empty:
    case Op::Eps:
    case Op::Sym: return *this;
    case Op::Cat: {
      std::vector<Regex> v;
      for (auto it = children().rbegin(); it != children().rend(); ++it) v.push_back(it->reverse());
      return cat(v);
    }
    case Op::Alt: {
      std::vector<Regex> v;
      for (const auto &c : children()) v.push_back(c.reverse());
      return alt(v);
    }
    case Op::Star: return star(children()[0].reverse());
    case Op::Plus: return plus(children()[0].reverse());
  }
  return *this;
}

Regex Regex::map(const std::function<Regex(const Atom &)> &f) const {
  switch (op()) {
    case Op::Empty:
    case Op::Eps: return *this;
    case Op::Sym: return f(atom());
    case Op::Cat:
    case Op::Alt: {
      std::vector<Regex> v;
      for (const auto &c : children()) v.push_back(c.map(f));
      return op() == Op::Cat ? cat(v) : alt(v);
    }
    case Op::Star: return star(children()[0].map(f));
    case Op::Plus: return plus(children()[0].map(f));
  }
  return *this;
}

void Regex::atoms(std::set<Atom> &out) const {
  if (op() == Op::Sym) out.insert(atom());
  for (const auto &c : children()) c.atoms(out);
}

std::string Regex::str() const {
  switch (op()) {
    case Op::Empty: return "{}";
    case Op::Eps: return "()";
    case Op::Sym: return atom().str();
    case Op::Cat: {
      std::string s;
      for (const auto &c : children()) s += c.op() == Op::Alt ? "(" + c.str() + ")" : c.str();
      return s;
    }
    case Op::Alt: {
      std::string s;
      for (size_t i = 0; i < children().size(); ++i) s += (i ? "|" : "") + children()[i].str();
      return s;
    }
    case Op::Star:
    case Op::Plus: {
      const Regex &c = children()[0];
      std::string inner = c.op() == Op::Sym ? c.str() : "(" + c.str() + ")";
      return inner + (op() == Op::Star ? "*" : "+");
    }
  }
  return "";
}

std::strong_ordering Regex::operator<=>(const Regex &o) const {
  if (n_ == o.n_) return std::strong_ordering::equal;
  if (auto c = op() <=> o.op(); c != 0) return c;
  if (op() == Op::Sym) return atom() <=> o.atom();
  const auto &a = children(), &b = o.children();
  for (size_t i = 0; i < a.size() && i < b.size(); ++i)
    if (auto c = a[i] <=> b[i]; c != 0) return c;
  return a.size() <=> b.size();
}

// ---------------------------------------------------------------- parser

namespace {

struct RegexParser {
  std::string_view s;
  size_t i = 0;

  [[noreturn]] void fail(const std::string &m) const {
    throw std::invalid_argument("regex offset " + std::to_string(i) + ": " + m);
  }
  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  bool peek(char c) {
    ws();
    return i < s.size() && s[i] == c;
  }
  int number() {
    size_t b = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (b == i) fail("expected a number");
    return std::stoi(std::string(s.substr(b, i - b)));
  }

  Regex alt() {
    std::vector<Regex> v{cat()};
    while (peek('|')) {
      ++i;
      v.push_back(cat());
    }
    return Regex::alt(v);
  }
  Regex cat() {
    std::vector<Regex> v;
    while (true) {
      ws();
      if (i >= s.size() || s[i] == '|' || s[i] == ')') break;
      v.push_back(post());
    }
    return Regex::cat(v);
  }
  Regex post() {
    Regex r = prim();
    while (true) {
      if (peek('*')) {
        ++i;
        r = Regex::star(r);
      } else if (peek('+')) {
        ++i;
        r = Regex::plus(r);
      } else {
        return r;
      }
    }
  }
  Regex prim() {
    ws();
    if (i >= s.size()) fail("unexpected end");
    char c = s[i];
    if (c == '(') {
      ++i;
      if (peek(')')) {
        ++i;
        return Regex::eps();
      }
      Regex r = alt();
      if (!peek(')')) fail("expected ')'");
      ++i;
      return r;
    }
    if (c == '{') {
      ++i;
      if (!peek('}')) fail("expected '}'");
      ++i;
      return Regex::empty();
    }
    Atom a;
    if (c == 'S') {
      ++i;
      a = Atom::axiom();
    } else if (c == '[' || c == ']') {
      ++i;
      int n = number();
      a = c == '[' ? Atom::open(n) : Atom::close(n);
    } else if (c >= 'a' && c <= 'z') {
      ++i;
      a = Atom::term(c);
    } else if (c == '\'') {
      if (i + 2 >= s.size() || s[i + 2] != '\'') fail("bad quoted terminal");
      a = Atom::term(s[i + 1]);
      i += 3;
    } else {
      fail(std::string("unexpected '") + c + "'");
    }
    if (i < s.size() && s[i] == '^') {
      ++i;
      a.q = number();
    }
    if (i < s.size() && s[i] == '~') {
      ++i;
      a.mark = number();
    }
    return Regex::sym(a);
  }
};

}  // namespace

Regex parse_regex(std::string_view text) {
  RegexParser p{text};
  Regex r = p.alt();
  p.ws();
  if (p.i != text.size()) p.fail("trailing input");
  return r;
}

// ---------------------------------------------------------------- Glushkov

namespace {

struct Info {
  bool nullable;
  std::set<int> first, last;
};

Info build(const Regex &r, Glushkov &g) {
  switch (r.op()) {
    case Op::Empty: return {false, {}, {}};
    case Op::Eps: return {true, {}, {}};
    case Op::Sym: {
      int p = static_cast<int>(g.pos.size());
      g.pos.push_back(r.atom());
      g.follow.emplace_back();
      return {false, {p}, {p}};
    }
    case Op::Alt: {
      Info out{false, {}, {}};
      for (const auto &c : r.children()) {
        Info x = build(c, g);
        out.nullable |= x.nullable;
        out.first.insert(x.first.begin(), x.first.end());
        out.last.insert(x.last.begin(), x.last.end());
      }
      return out;
    }
    case Op::Cat: {
      Info out{true, {}, {}};
      for (const auto &c : r.children()) {
        Info x = build(c, g);
        for (int p : out.last) g.follow[p].insert(x.first.begin(), x.first.end());
        if (out.nullable) out.first.insert(x.first.begin(), x.first.end());
        if (x.nullable) out.last.insert(x.last.begin(), x.last.end());
        else out.last = x.last;
        out.nullable &= x.nullable;
      }
      return out;
    }
    case Op::Star:
    case Op::Plus: {
      Info x = build(r.children()[0], g);
      for (int p : x.last) g.follow[p].insert(x.first.begin(), x.first.end());
      if (r.op() == Op::Star) x.nullable = true;
      return x;
    }
  }
  return {false, {}, {}};
}

}  // namespace

Glushkov glushkov(const Regex &r) {
  Glushkov g;
  Info x = build(r, g);
  g.nullable = x.nullable;
  g.first = x.first;
  g.last = x.last;
  return g;
}

}  // namespace dycknf
