// Python module: thin wrappers that trade in text and JSON strings.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "natded/export.hpp"
#include "natded/prover.hpp"
#include "natded/wire.hpp"

namespace py = pybind11;
using namespace natded;

namespace {

PrintStyle style_from(const std::string& name) {
  if (name == "named") return PrintStyle::Named;
  if (name == "typewriter") return PrintStyle::Typewriter;
  if (name == "deep") return PrintStyle::DeepEmbed;
  throw py::value_error("style must be 'named', 'typewriter' or 'deep'");
}

Formula any_formula(const std::string& text) {
  // Constructor form starts with a constructor name; everything else is
  // surface syntax.
  for (const char* head : {"Falsity", "Pre ", "Imp ", "Dis ", "Con ", "Exi ", "Uni "}) {
    if (text.rfind(head, 0) == 0) return parse_deep_formula(text);
  }
  return parse_formula(text);
}

class PySession {
 public:
  explicit PySession(const std::string& goal) : state_(ProofState::new_session(any_formula(goal))) {}

  std::string apply(std::size_t line, const std::string& rule, std::optional<std::string> witness,
                    std::optional<std::string> formula) {
    auto lines = state_.lines();
    if (line == 0 || line > lines.size()) throw RuleError("UnknownNode", "no line " + std::to_string(line));
    auto r = rule_from_name(rule);
    if (!r) throw py::value_error("unknown rule " + rule);
    RuleRequest req;
    req.node = lines[line - 1].node;
    req.rule = *r;
    if (witness) req.witness = parse_term(*witness);
    if (formula) req.formula = any_formula(*formula);
    state_.apply_rule(req);
    return state();
  }

  std::string undo() {
    state_.undo();
    return state();
  }

  std::string state() const { return wire_state(state_).dump(); }
  bool complete() const { return state_.is_complete(); }

  std::string export_proof() const {
    return state_.is_complete() ? serialize_proof(state_.extract()) : serialize_partial(state_);
  }

  std::string export_isar(bool scratch) const {
    Derivation d = state_.extract();
    return scratch ? to_isar_open(d) : to_isar_closed(d);
  }

 private:
  ProofState state_;
};

}  // namespace

PYBIND11_MODULE(_natded, m) {
  m.doc() = "Natural deduction kernel, prover and exporters";

  static py::exception<Error> error(m, "NatdedError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      py::set_error(error, (e.code() + ": " + e.what()).c_str());
    }
  });

  m.def("parse", [](const std::string& text) { return render_formula(any_formula(text), PrintStyle::DeepEmbed); },
        py::arg("text"), "Surface or constructor syntax to constructor form.");
  m.def("render", [](const std::string& text, const std::string& style) {
        return render_formula(any_formula(text), style_from(style));
      },
      py::arg("text"), py::arg("style") = "named");

  m.def("check_proof", [](const std::string& text) {
        Derivation d = parse_proof(text);
        CheckReport r = check(d);
        json out{{"ok", r.ok}};
        if (r.failure) out["failure"] = wire_check_failure(*r.failure);
        return out.dump();
      },
      py::arg("proof"));

  m.def("export_isar", [](const std::string& text, bool scratch) {
        Derivation d = parse_proof(text);
        return scratch ? to_isar_open(d) : to_isar_closed(d);
      },
      py::arg("proof"), py::arg("scratch") = false);

  m.def("prove", [](const std::string& goal, const std::vector<std::string>& assumptions, std::size_t max_bound,
                    long timeout_ms) {
        Sequent s;
        s.goal = any_formula(goal);
        for (const auto& a : assumptions) s.assumptions.push_back(any_formula(a));
        Budget b;
        b.max_bound = max_bound;
        b.wall_time = std::chrono::milliseconds(timeout_ms);
        py::gil_scoped_release release;
        return std::string(verdict_name(prove(s, b).verdict));
      },
      py::arg("goal"), py::arg("assumptions") = std::vector<std::string>{}, py::arg("max_bound") = 10,
      py::arg("timeout_ms") = 500);

  m.def("countermodel", [](const std::string& formula, std::size_t max_size, std::uint64_t budget, std::uint64_t seed) {
        CountermodelOptions o;
        o.max_size = max_size;
        o.budget = budget;
        o.seed = seed;
        Formula f = any_formula(formula);
        py::gil_scoped_release release;
        return wire_countermodel(find_countermodel(f, o)).dump();
      },
      py::arg("formula"), py::arg("max_size") = 3, py::arg("budget") = 100000, py::arg("seed") = 0x5eed);

  py::class_<PySession>(m, "_Session")
      .def(py::init<const std::string&>(), py::arg("goal"))
      .def("apply", &PySession::apply, py::arg("line"), py::arg("rule"), py::arg("witness") = std::nullopt,
           py::arg("formula") = std::nullopt)
      .def("undo", &PySession::undo)
      .def("state", &PySession::state)
      .def_property_readonly("complete", &PySession::complete)
      .def("export_proof", &PySession::export_proof)
      .def("export_isar", &PySession::export_isar, py::arg("scratch") = false);
}
