// dycknf: convert, trace, graph, approx, verify
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "dycknf/dyck.hpp"
#include "dycknf/pipeline.hpp"

using namespace dycknf;

namespace {

enum Exit { kOk = 0, kFailed = 1, kUsage = 2 };

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void emit(const std::string &text, const std::string &path) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write " + path);
  out << text;
}

Atom parse_root(const std::string &s) {
  if (s == "S") return Atom::axiom();
  if (s.size() > 1 && s[0] == ']') {
    try {
      return Atom::close(std::stoi(s.substr(1)));
    } catch (const std::exception &) {
    }
  }
  throw UsageError("root must be S or ]j, got " + s);
}

int convert(const Cfg &g, const std::string &to) {
  if (to == "cnf") std::cout << to_cnf(g).first.to_string();
  else std::cout << to_dyck_input(g).grammar.to_string();
  return kOk;
}

int trace(const Cfg &g, const std::string &word) {
  DyckInput d = to_dyck_input(g);
  ExtendedDyckGrammar ext = extend_grammar(d.grammar);
  auto tl = enumerate_trace_language(ext, static_cast<int>(word.size()));
  int found = 0;
  for (const auto &[t, count] : tl.derivations) {
    if (apply_phi(ext, t) != word) continue;
    std::cout << to_string(t) << "\n";
    ++found;
  }
  if (!tl.complete) std::cerr << "warning: trace enumeration stopped early\n";
  if (!found) {
    std::cerr << "'" << word << "' is not in the language\n";
    return kFailed;
  }
  return kOk;
}

int graph(const Cfg &g, const std::string &kind, const std::string &root, const std::string &out) {
  DyckGrammar dg = to_dyck_input(g).grammar;
  Classification cls = classify_pairs(dg);
  if (kind == "dep") {
    Atom r = parse_root(root);
    if (r.kind == Atom::Close && (r.idx < 1 || r.idx > dg.k || cls.of(r.idx) != PairClass::N3))
      throw UsageError(root + " is not the right bracket of a pair without terminal sides");
    emit(dependency_dot(build_dependency_graph(dg, cls, r), cls), out);
  } else if (kind == "ext") {
    emit(extended_dot(build_extended_graph(dg, cls, build_regex_sets(dg, cls)), cls), out);
  } else {
    emit(refined_dot(refine(dg).graph, cls), out);
  }
  return kOk;
}

int approx(const Cfg &g, const std::string &out, const std::string &dot, const std::string &json) {
  Pipeline p = run_pipeline(g);
  emit(p.approximation.to_cfg().to_string(), out);
  if (!dot.empty()) emit(automaton_dot(p.automaton), dot);
  if (!json.empty()) emit(automaton_json(p.automaton) + "\n", json);
  return kOk;
}

int verify(const Cfg &g, const std::string &what, int n, std::uint64_t seed, bool verbose) {
  std::vector<Report> reports;
  if (what == "dycknf") {
    reports.push_back(verify_dycknf(g, n, seed));
  } else {
    Pipeline p = run_pipeline(g);
    if (what == "cs") {
      reports.push_back(verify_cs(p.ext, p.nfa_R(), p.codec, n, "cs"));
      reports.push_back(verify_cs(p.ext, p.nfa_Rm(), p.codec, n, "cs-refined"));
    } else {
      reports.push_back(verify_superset(p.dyck.grammar, p.approximation, n));
    }
  }
  bool ok = true;
  for (const auto &r : reports) {
    std::cout << (verbose ? r.text() : r.line() + "\n");
    ok = ok && r.holds;
  }
  return ok ? kOk : kFailed;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Dyck normal form and regular approximation toolkit"};
  app.require_subcommand(1);
  std::string file;

  auto *c = app.add_subcommand("convert", "print the grammar in CNF or Dyck normal form");
  std::string to = "dnf";
  c->add_option("--to", to)->check(CLI::IsMember({"cnf", "dnf"}));
  c->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto *t = app.add_subcommand("trace", "print the trace words of a word");
  std::string word;
  t->add_option("--word", word)->required();
  t->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto *gr = app.add_subcommand("graph", "export a dependency graph as DOT");
  std::string kind = "dep", root = "S", dot;
  gr->add_option("--kind", kind)->check(CLI::IsMember({"dep", "ext", "refined"}));
  gr->add_option("--root", root);
  gr->add_option("--dot", dot, "output path (stdout when omitted)");
  gr->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto *a = app.add_subcommand("approx", "regular superset approximation");
  std::string out, json;
  a->add_option("-o,--output", out, "regular grammar path (stdout when omitted)");
  a->add_option("--dot", dot, "automaton as DOT");
  a->add_option("--json", json, "automaton transition table");
  a->add_option("file", file)->required()->check(CLI::ExistingFile);

  auto *v = app.add_subcommand("verify", "bounded verification suites");
  std::string what;
  int max_len = 8;
  std::uint64_t seed = 1;
  bool verbose = false;
  v->add_option("suite", what)->required()->check(CLI::IsMember({"cs", "superset", "dycknf"}));
  v->add_option("--max-len", max_len)->check(CLI::NonNegativeNumber);
  v->add_option("--seed", seed);
  v->add_flag("-v,--verbose", verbose, "full reports with counterexamples");
  v->add_option("file", file)->required()->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError &e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }

  Cfg g;
  try {
    g = load_grammar(file);
  } catch (const std::exception &e) {
    std::cerr << file << ": " << e.what() << "\n";
    return kUsage;
  }
  try {
    if (c->parsed()) return convert(g, to);
    if (t->parsed()) return trace(g, word);
    if (gr->parsed()) return graph(g, kind, root, dot);
    if (a->parsed()) return approx(g, out, dot, json);
    return verify(g, what, max_len, seed, verbose);
  } catch (const UsageError &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFailed;
  }
}
