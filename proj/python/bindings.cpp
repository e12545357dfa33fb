#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dycknf/dyck.hpp"
#include "dycknf/pipeline.hpp"

namespace py = pybind11;
using namespace dycknf;

namespace {

py::dict report_dict(const Report &r) {
  py::dict d;
  d["claim"] = r.claim;
  d["bound"] = r.bound;
  d["holds"] = r.holds;
  d["diff"] = r.diff;
  d["counterexamples"] = r.counterexamples;
  d["line"] = r.line();
  return d;
}

RefineOptions options(std::optional<std::size_t> cap) {
  RefineOptions o;
  if (cap) o.max_connections = *cap;
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  py::register_exception<ParseError>(m, "ParseError", PyExc_ValueError);
  py::register_exception<RefineError>(m, "RefineError", PyExc_RuntimeError);

  m.def("normalize", [](const std::string &text) { return parse_grammar(text).to_string(); },
        "parse a grammar and print it back");
  m.def("to_cnf", [](const std::string &text) { return to_cnf(parse_grammar(text)).first.to_string(); });
  m.def("to_dyck", [](const std::string &text) { return to_dyck_input(parse_grammar(text)).grammar.to_string(); });

  m.def("member", [](const std::string &text, const std::string &word) {
    return cyk_membership(to_cnf(parse_grammar(text)).first, word);
  });
  m.def("language", [](const std::string &text, int max_len) {
    return enumerate_language(to_cnf(parse_grammar(text)).first, max_len);
  });

  m.def("traces", [](const std::string &text, const std::string &word) {
    ExtendedDyckGrammar ext = extend_grammar(to_dyck_input(parse_grammar(text)).grammar);
    std::vector<std::string> out;
    for (const auto &[t, _] : enumerate_trace_language(ext, static_cast<int>(word.size())).derivations)
      if (apply_phi(ext, t) == word) out.push_back(to_string(t));
    return out;
  });

  m.def("regex_r", [](const std::string &text) {
    Pipeline p = run_pipeline(parse_grammar(text));
    return regular_language_R(p.ext, p.extended).str();
  });
  m.def("regex_rm", [](const std::string &text, std::optional<std::size_t> cap) {
    Pipeline p = run_pipeline(parse_grammar(text), options(cap));
    return regular_language_Rm(p.ext, p.refinement.graph).str();
  }, py::arg("text"), py::arg("max_connections") = py::none());

  m.def("approx", [](const std::string &text, std::optional<std::size_t> cap) {
    Pipeline p = run_pipeline(parse_grammar(text), options(cap));
    py::dict d;
    d["grammar"] = p.approximation.to_cfg().to_string();
    d["dot"] = automaton_dot(p.automaton);
    d["json"] = automaton_json(p.automaton);
    d["states"] = p.automaton.nfa.states();
    return d;
  }, py::arg("text"), py::arg("max_connections") = py::none());
  m.def("approx_words", [](const std::string &text, int max_len) {
    return enumerate_regular(run_pipeline(parse_grammar(text)).approximation, max_len);
  });

  m.def("verify", [](const std::string &text, const std::string &suite, int max_len, std::uint64_t seed) {
    Cfg g = parse_grammar(text);
    py::list out;
    if (suite == "dycknf") {
      out.append(report_dict(verify_dycknf(g, max_len, seed)));
      return out;
    }
    Pipeline p = run_pipeline(g);
    if (suite == "cs") {
      out.append(report_dict(verify_cs(p.ext, p.nfa_R(), p.codec, max_len, "cs")));
      out.append(report_dict(verify_cs(p.ext, p.nfa_Rm(), p.codec, max_len, "cs-refined")));
    } else if (suite == "superset") {
      out.append(report_dict(verify_superset(p.dyck.grammar, p.approximation, max_len)));
    } else {
      throw py::value_error("suite must be cs, superset or dycknf");
    }
    return out;
  }, py::arg("text"), py::arg("suite"), py::arg("max_len"), py::arg("seed") = 0);
}
