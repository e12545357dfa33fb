#include "dycknf/pipeline.hpp"

#include <fstream>
#include <sstream>

namespace dycknf {

DyckInput to_dyck_input(const Cfg &g) {
  DyckInput d{g, std::nullopt, {}};
  if (looks_bracketed(g) && dnf_violations(g).empty()) {
    d.grammar = dyck_from_cfg(g);
  } else {
    auto [cnf, _] = to_cnf(g);
    d.conversion = to_dyck_nf(cnf);
    d.grammar = d.conversion->grammar;
  }
  return d;
}

Pipeline run_pipeline(const Cfg &g, const RefineOptions &opt) {
  Pipeline p;
  p.dyck = to_dyck_input(g);
  const DyckGrammar &dg = p.dyck.grammar;
  p.ext = extend_grammar(dg);
  p.cls = classify_pairs(dg);
  p.regex_sets = build_regex_sets(dg, p.cls);
  p.extended = build_extended_graph(dg, p.cls, p.regex_sets);
  p.refinement = refine(dg, opt);
  p.automaton = build_automaton(p.ext, p.cls, p.refinement.graph);
  p.approximation = to_regular_grammar(p.automaton);
  return p;
}

Cfg load_grammar(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_grammar(ss.str());
}

}  // namespace dycknf
