#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "loopm/cli.hpp"
#include "loopm/errors.hpp"
#include "loopm/frontend.hpp"
#include "loopm/invariants.hpp"
#include "loopm/recurrences.hpp"
#include "loopm/sensitivity.hpp"
#include "loopm/simulator.hpp"
#include "loopm/unsolvable.hpp"

namespace py = pybind11;
using namespace loopm;

namespace {

Bindings to_bindings(const std::map<std::string, std::string>& b) {
  Bindings out;
  for (const auto& [k, v] : b) out[k] = Rational(v);
  return out;
}

ExpPoly closed_form(const Ast& ast, const std::string& goal_text) {
  MomentGoal goal = MomentGoal::parse(goal_text);
  MomentTransformer t(ast);
  auto raws = goal.raw_monomials();
  auto forms = solve_cfinite(extract_recurrences(t, raws));
  std::vector<std::pair<std::string, ExpPoly>> subs;
  for (const auto& m : raws) subs.emplace_back(moment_symbol(m), combine(t.reduce(Poly::term(m, RatFunc(1))), forms));
  return substitute_forms(goal_polynomial(goal), subs);
}

/// Closed form plus evaluation helpers on the Python side.
struct ClosedForm {
  ExpPoly form;

  std::string str() const { return form.str(); }
  std::string at(unsigned n, const std::map<std::string, std::string>& b) const {
    return evaluate_at(form, n, to_bindings(b)).str();
  }
  double at_float(unsigned n, const std::map<std::string, std::string>& b) const {
    return to_double(evaluate_at(form, n, to_bindings(b)));
  }
};

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Moment-based analysis of probabilistic loops";

  static py::exception<AnalysisError> error(m, "AnalysisError");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const AnalysisError& e) {
      py::object exc = py::reinterpret_borrow<py::object>(error.ptr())(e.diagnostic());
      exc.attr("kind") = std::string(to_string(e.kind()));
      exc.attr("module") = e.module();
      PyErr_SetObject(error.ptr(), exc.ptr());
    }
  });

  py::class_<ClosedForm>(m, "ClosedForm")
      .def("__str__", &ClosedForm::str)
      .def("__repr__", [](const ClosedForm& c) { return "ClosedForm(" + c.str() + ")"; })
      .def("at", &ClosedForm::at, py::arg("n"), py::arg("bindings") = std::map<std::string, std::string>{})
      .def("at_float", &ClosedForm::at_float, py::arg("n"),
           py::arg("bindings") = std::map<std::string, std::string>{});

  py::class_<Ast>(m, "Program")
      .def_static("parse", [](const std::string& src) { return parse(src); })
      .def_readonly("variables", &Ast::variables)
      .def_property_readonly("parameters", [](const Ast& a) { return std::vector<std::string>(a.params.begin(), a.params.end()); })
      .def("__str__", [](const Ast& a) { return print_program(a); })
      .def("defective", [](const Ast& a) { return find_defective(a); });

  m.def("closed_form", [](const Ast& a, const std::string& goal) { return ClosedForm{closed_form(a, goal)}; },
        py::arg("program"), py::arg("goal"));

  m.def(
      "invariants",
      [](const Ast& a, const std::vector<std::string>& goals) {
        std::vector<std::pair<std::string, ExpPoly>> forms;
        for (const auto& g : goals) forms.emplace_back(MomentGoal::parse(g).str(), closed_form(a, g));
        return invariant_basis(forms).lines();
      },
      py::arg("program"), py::arg("goals"));

  m.def(
      "sensitivity",
      [](const Ast& a, const std::string& goal, const std::string& param) {
        return ClosedForm{solve_sensitivity(a, {MomentGoal::parse(goal), param})};
      },
      py::arg("program"), py::arg("goal"), py::arg("param"));

  m.def(
      "combinations",
      [](const Ast& a, unsigned degree) {
        std::vector<py::dict> out;
        for (const auto& c : synthesize_combinations(a, degree).candidates) {
          py::dict d;
          d["combination"] = c.S.str();
          d["lambda"] = c.lambda.str();
          d["inhomogeneous"] = c.inhomogeneous.str();
          d["closed_form"] = solve_combination(a, c).str();
          d["loop"] = print_program(synth_solvable_loop(a, c));
          out.push_back(std::move(d));
        }
        return out;
      },
      py::arg("program"), py::arg("degree") = 2);

  m.def(
      "simulate",
      [](const Ast& a, const std::string& goal, std::size_t n, std::size_t samples, std::uint64_t seed,
         const std::map<std::string, std::string>& b) {
        SimulationOptions o;
        o.iterations = n;
        o.samples = samples;
        o.seed = seed;
        o.bindings = to_bindings(b);
        Estimate e;
        {
          py::gil_scoped_release release;
          e = estimate_moment(run_samples(a, o), MomentGoal::parse(goal), n);
        }
        return std::make_pair(e.value, e.stderr_);
      },
      py::arg("program"), py::arg("goal"), py::arg("n"), py::arg("samples") = 10000, py::arg("seed") = 0,
      py::arg("bindings") = std::map<std::string, std::string>{});

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::vector<std::string> all = {"loopm"};
        all.insert(all.end(), args.begin(), args.end());
        std::vector<const char*> argv;
        for (const auto& s : all) argv.push_back(s.c_str());
        std::ostringstream out, err;
        int code = main_with_args(static_cast<int>(argv.size()), argv.data(), out, err);
        return py::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
