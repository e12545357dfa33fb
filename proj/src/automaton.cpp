#include "dycknf/automaton.hpp"

#include <deque>
#include <limits>
#include <stdexcept>

namespace dycknf {

int Nfa::add_state() {
  out.emplace_back();
  return states() - 1;
}

void Nfa::add(int from, int label, int to) {
  auto &v = out.at(from);
  if (to < 0 || to >= states()) throw std::out_of_range("Nfa::add target");
  for (auto &e : v)
    if (e.first == label && e.second == to) return;
  v.push_back({label, to});
}

std::set<int> Nfa::closure(std::set<int> s) const {
  std::vector<int> st(s.begin(), s.end());
  while (!st.empty()) {
    int x = st.back();
    st.pop_back();
    for (auto [l, y] : out[x])
      if (l == kEps && s.insert(y).second) st.push_back(y);
  }
  return s;
}

std::set<int> Nfa::step(const std::set<int> &s, int label) const {
  std::set<int> n;
  for (int x : s)
    for (auto [l, y] : out[x])
      if (l == label) n.insert(y);
  return closure(n);
}

bool Nfa::accepts(const std::vector<int> &w) const {
  if (out.empty()) return false;
  std::set<int> cur = closure({start});
  for (int c : w) {
    cur = step(cur, c);
    if (cur.empty()) return false;
  }
  for (int x : cur)
    if (accepting.count(x)) return true;
  return false;
}

std::set<int> Nfa::alphabet() const {
  std::set<int> a;
  for (const auto &v : out)
    for (auto [l, _] : v)
      if (l != kEps) a.insert(l);
  return a;
}

int AtomCodec::id(const Atom &a) {
  auto it = ids_.find(a);
  if (it != ids_.end()) return it->second;
  int n = static_cast<int>(atoms_.size());
  ids_.emplace(a, n);
  atoms_.push_back(a);
  return n;
}

Nfa nfa_from_regex(const Regex &r, AtomCodec &codec) {
  Glushkov g = glushkov(r);
  Nfa a;
  a.add_state();
  for (size_t p = 0; p < g.pos.size(); ++p) a.add_state();
  for (int p : g.first) a.add(0, codec.id(g.pos[p]), p + 1);
  for (size_t p = 0; p < g.pos.size(); ++p)
    for (int f : g.follow[p]) a.add(static_cast<int>(p) + 1, codec.id(g.pos[f]), f + 1);
  for (int p : g.last) a.accepting.insert(p + 1);
  if (g.nullable) a.accepting.insert(0);
  return a;
}

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// On-the-fly subset construction with distance-to-accept per subset.
class Dfa {
 public:
  explicit Dfa(const Nfa &a) : a_(a) {
    int n = a.states();
    dist_.assign(n, kInf);
    std::vector<std::vector<std::pair<int, int>>> rev(n);
    for (int x = 0; x < n; ++x)
      for (auto [l, y] : a.out[x]) rev[y].push_back({l, x});
    std::deque<int> dq;
    for (int f : a.accepting) {
      dist_[f] = 0;
      dq.push_back(f);
    }
    while (!dq.empty()) {
      int y = dq.front();
      dq.pop_front();
      for (auto [l, x] : rev[y]) {
        int w = l == Nfa::kEps ? 0 : 1;
        if (dist_[y] + w < dist_[x]) {
          dist_[x] = dist_[y] + w;
          if (w == 0) dq.push_front(x);
          else dq.push_back(x);
        }
      }
    }
    if (n) initial = intern(a.closure({a.start}));
  }

  int initial = -1;

  int intern(std::set<int> s) {
    auto it = ids_.find(s);
    if (it != ids_.end()) return it->second;
    int id = static_cast<int>(sets_.size());
    int d = kInf;
    bool acc = false;
    for (int x : s) {
      d = std::min(d, dist_[x]);
      acc |= a_.accepting.count(x) > 0;
    }
    ids_.emplace(s, id);
    sets_.push_back(std::move(s));
    d_.push_back(d);
    acc_.push_back(acc);
    trans_.emplace_back();
    built_.push_back(false);
    return id;
  }

  const std::vector<std::pair<int, int>> &next(int id) {
    if (!built_[id]) {
      std::map<int, std::set<int>> by;
      for (int x : sets_[id])
        for (auto [l, y] : a_.out[x])
          if (l != Nfa::kEps) by[l].insert(y);
      std::vector<std::pair<int, int>> t;
      for (auto &[l, s] : by) {
        int tid = intern(a_.closure(s));
        if (d_[tid] < kInf) t.push_back({l, tid});
      }
      trans_[id] = std::move(t);
      built_[id] = true;
    }
    return trans_[id];
  }

  int dist(int id) const { return d_[id]; }
  bool accepting(int id) const { return acc_[id]; }

 private:
  const Nfa &a_;
  std::vector<int> dist_;
  std::map<std::set<int>, int> ids_;
  std::vector<std::set<int>> sets_;
  std::vector<int> d_;
  std::vector<char> acc_;
  std::vector<std::vector<std::pair<int, int>>> trans_;
  std::vector<char> built_;
};

}  // namespace

Enumeration enumerate_words(const Nfa &a, int max_len, std::size_t budget) {
  Enumeration out;
  if (a.states() == 0 || max_len < 0) return out;
  Dfa d(a);
  std::vector<int> word;
  std::size_t steps = 0;
  auto rec = [&](auto &self, int s) -> void {
    if (!out.complete) return;
    if (++steps > budget) {
      out.complete = false;
      return;
    }
    if (d.accepting(s)) out.words.insert(word);
    if (static_cast<int>(word.size()) == max_len) return;
    auto nx = d.next(s);  // copy: interning may reallocate
    for (auto [l, t] : nx) {
      if (static_cast<int>(word.size()) + 1 + d.dist(t) > max_len) continue;
      word.push_back(l);
      self(self, t);
      word.pop_back();
    }
  };
  if (d.dist(d.initial) <= max_len) rec(rec, d.initial);
  return out;
}

Enumeration enumerate_dyck_words(const Nfa &a, int max_len,
                                 const std::function<std::optional<std::pair<int, bool>>(int)> &bracket,
                                 std::size_t budget) {
  Enumeration out;
  if (a.states() == 0 || max_len < 0) return out;
  Dfa d(a);
  std::vector<int> word, stack;
  std::size_t steps = 0;
  auto rec = [&](auto &self, int s) -> void {
    if (!out.complete) return;
    if (++steps > budget) {
      out.complete = false;
      return;
    }
    if (stack.empty() && d.accepting(s)) out.words.insert(word);
    int len = static_cast<int>(word.size());
    auto nx = d.next(s);
    for (auto [l, t] : nx) {
      auto b = bracket(l);
      if (!b) continue;
      int depth = static_cast<int>(stack.size()) + (b->second ? 1 : -1);
      if (!b->second && (stack.empty() || stack.back() != b->first)) continue;
      if (len + 1 + std::max(d.dist(t), depth) > max_len) continue;
      word.push_back(l);
      if (b->second) stack.push_back(b->first);
      else stack.pop_back();
      self(self, t);
      if (b->second) stack.pop_back();
      else stack.push_back(b->first);
      word.pop_back();
    }
  };
  if (d.dist(d.initial) <= max_len) rec(rec, d.initial);
  return out;
}

std::uint64_t count_words(const Nfa &a, int len) {
  if (a.states() == 0 || len < 0) return 0;
  Dfa d(a);
  std::map<int, std::uint64_t> layer{{d.initial, 1}};
  for (int i = 0; i < len; ++i) {
    std::map<int, std::uint64_t> next;
    for (auto [s, c] : layer) {
      auto nx = d.next(s);
      for (auto [l, t] : nx)
        if (i + 1 + d.dist(t) <= len) next[t] += c;
    }
    layer = std::move(next);
  }
  std::uint64_t total = 0;
  for (auto [s, c] : layer)
    if (d.accepting(s)) total += c;
  return total;
}

std::vector<int> to_letters(const std::string &w) {
  std::vector<int> v;
  for (char c : w) v.push_back(static_cast<unsigned char>(c));
  return v;
}

std::string to_text(const std::vector<int> &w) {
  std::string s;
  for (int c : w) s += static_cast<char>(c);
  return s;
}

}  // namespace dycknf
