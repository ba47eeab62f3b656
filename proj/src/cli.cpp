#include "loopm/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <fstream>
#include <iostream>
#include <map>
#include <sstream>

#include "loopm/errors.hpp"
#include "loopm/frontend.hpp"
#include "loopm/invariants.hpp"
#include "loopm/sensitivity.hpp"
#include "loopm/simulator.hpp"
#include "loopm/unsolvable.hpp"

namespace loopm {

namespace {

using nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json terms_json(const ExpPoly& cf) {
  json terms = json::array();
  for (const auto& [base, p] : cf.terms()) terms.push_back({{"base", base.str()}, {"coefficient", p.str()}});
  json head = json::object();
  for (const auto& [n, v] : cf.head()) head[std::to_string(n)] = v.str();
  return {{"terms", terms}, {"head", head}};
}

json error_json(const AnalysisError& e) {
  return {{"kind", std::string(to_string(e.kind()))},
          {"module", e.module()},
          {"restriction", e.restriction()},
          {"message", e.what()}};
}

Bindings parse_bindings(const std::vector<std::string>& binds) {
  Bindings out;
  for (const auto& b : binds) {
    auto eq = b.find('=');
    if (eq == std::string::npos || eq == 0) throw UsageError("--bind expects NAME=VALUE, got '" + b + "'");
    Rational v;
    try {
      v = Rational(b.substr(eq + 1));
      v.canonicalize();
      if (v.get_den() == 0) throw std::invalid_argument("zero denominator");
    } catch (const std::invalid_argument&) {
      throw UsageError("--bind value '" + b.substr(eq + 1) + "' is not a rational number");
    }
    out[b.substr(0, eq)] = v;
  }
  return out;
}

/// Closed forms of goals over one shared transformer.
class Analyzer {
 public:
  explicit Analyzer(const Ast& ast) : ast_(ast), t_(ast) {}

  MomentTransformer& transformer() { return t_; }

  ExpPoly goal_form(const MomentGoal& goal, std::string* dump = nullptr) {
    std::vector<Monomial> raws = goal.raw_monomials();
    RecurrenceSystem sys = extract_recurrences(t_, raws);
    if (dump) *dump = sys.dump();
    auto forms = solve_cfinite(sys);
    std::vector<std::pair<std::string, ExpPoly>> subs;
    for (const auto& m : raws)
      subs.emplace_back(moment_symbol(m), combine(t_.reduce(Poly::term(m, RatFunc(1))), forms));
    return substitute_forms(goal_polynomial(goal), subs);
  }

 private:
  const Ast& ast_;
  MomentTransformer t_;
};

class Report {
 public:
  Report(const RunConfig& c, std::ostream& out, std::ostream& err) : json_(c.format == RunConfig::Format::Json), out_(out), err_(err) {
    doc_ = {{"program", c.benchmark}, {"goals", json::array()}, {"invariants", json::array()},
            {"sensitivities", json::array()}, {"diagnostics", json::array()}};
  }

  void line(const std::string& text) {
    if (!json_) out_ << text << "\n";
  }
  void error(const AnalysisError& e) {
    failed_ = true;
    doc_["diagnostics"].push_back(error_json(e));
    if (!json_) err_ << e.diagnostic() << "\n";
  }
  json& doc() { return doc_; }
  bool failed() const { return failed_; }
  void finish() {
    if (json_) out_ << doc_.dump(2) << "\n";
  }

 private:
  bool json_;
  std::ostream& out_;
  std::ostream& err_;
  json doc_;
  bool failed_ = false;
};

void run_simulation(const RunConfig& c, const Ast& ast, const std::vector<MomentGoal>& goals, Report& r) {
  SimulationOptions o;
  o.iterations = *c.simulate;
  o.samples = c.samples;
  o.seed = c.seed;
  o.bindings = parse_bindings(c.bind);
  auto traces = run_samples(ast, o);
  json sims = json::array();
  for (const auto& g : goals) {
    Estimate e = estimate_moment(traces, g, o.iterations);
    std::ostringstream s;
    s.precision(10);
    s << g.str() << " [n=" << o.iterations << ", " << o.samples << " samples] = " << e.value << " +- " << e.stderr_;
    r.line(s.str());
    sims.push_back({{"goal", g.str()}, {"n", o.iterations}, {"estimate", e.value}, {"stderr", e.stderr_}});
  }
  r.doc()["simulation"] = sims;
  if (!c.csv.empty()) {
    std::ofstream f(c.csv);
    if (!f) throw UsageError("cannot write " + c.csv);
    write_csv(traces, f);
  }
}

void run_synthesis(const RunConfig& c, const Ast& ast, Report& r) {
  CombinationSearch found = synthesize_combinations(ast, c.inv_deg);
  for (const auto& n : found.notes) r.line("note: " + n);
  if (found.candidates.empty()) r.line("no combinations of degree <= " + std::to_string(c.inv_deg));
  json cands = json::array();
  for (const auto& cand : found.candidates) {
    json j = {{"combination", cand.S.str()}, {"lambda", cand.lambda.str()}, {"inhomogeneous", cand.inhomogeneous.str()}};
    r.line(cand.str());
    if (c.synth_unsolv_inv) {
      try {
        ExpPoly cf = solve_combination(ast, cand);
        r.line("E(" + cand.S.str() + ") = " + cf.str());
        j["closed_form"] = cf.str();
        j["closed_form_terms"] = terms_json(cf);
      } catch (const AnalysisError& e) {
        r.error(e);
      }
    }
    if (c.synth_solv_loop) {
      std::string loop = print_program(synth_solvable_loop(ast, cand));
      if (!loop.empty() && loop.back() == '\n') loop.pop_back();
      r.line(loop);
      j["loop"] = loop;
    }
    cands.push_back(j);
  }
  r.doc()["combinations"] = cands;
}

void run_analysis(const RunConfig& c, const Ast& ast, const std::vector<MomentGoal>& goals, Report& r) {
  Analyzer an(ast);
  std::optional<std::string> param = c.sens_diff ? c.sens_diff : c.sens;
  if (param) {
    for (const auto& g : goals) {
      SensitivityGoal sg{g, *param};
      try {
        ExpPoly d = c.sens ? solve_sensitivity(ast, sg) : diff_closed_form(an.goal_form(g), *param);
        r.line(sg.str() + " = " + d.str());
        r.doc()["sensitivities"].push_back(
            {{"goal", g.str()}, {"param", *param}, {"closed_form", d.str()}, {"closed_form_terms", terms_json(d)}});
      } catch (const AnalysisError& e) {
        r.error(e);
      }
    }
    return;
  }

  if (c.after_loop && !ast.has_guard())
    throw AnalysisError(ErrorKind::InvalidArgument, "cli", "--after_loop needs a loop with a guard");
  std::vector<std::pair<std::string, ExpPoly>> forms;
  for (const auto& g : goals) {
    try {
      std::string dump;
      ExpPoly cf = an.goal_form(g, c.dump ? &dump : nullptr);
      if (c.dump) r.line(dump.substr(0, dump.size() - (dump.empty() || dump.back() != '\n' ? 0 : 1)));
      json j = {{"goal", g.str()}, {"closed_form", cf.str()}, {"closed_form_terms", terms_json(cf)}};
      if (c.after_loop) {
        Limit l = limit_at_infinity(cf);
        r.line(g.str() + " [after loop] = " + l.str());
        j["after_loop"] = l.str();
      } else {
        r.line(g.str() + " = " + cf.str());
      }
      r.doc()["goals"].push_back(j);
      forms.emplace_back(g.str(), cf);
    } catch (const AnalysisError& e) {
      r.error(e);
    }
  }
  if (c.invariants && !forms.empty()) {
    InvariantBasis basis = invariant_basis(forms);
    for (const auto& n : basis.notes) r.line("note: " + n);
    for (const auto& l : basis.lines()) {
      r.line(l);
      r.doc()["invariants"].push_back(l);
    }
  }
}

}  // namespace

int run(const RunConfig& c, std::ostream& out, std::ostream& err) {
  if (c.sens_diff && c.sens) {
    err << "usage: --sens_diff and --sens are mutually exclusive\n";
    return kExitUsage;
  }
  if (c.inv_deg < 1) {
    err << "usage: --inv_deg must be at least 1\n";
    return kExitUsage;
  }
  std::ifstream in(c.benchmark);
  if (!in) {
    err << "usage: cannot read benchmark '" << c.benchmark << "'\n";
    return kExitUsage;
  }
  std::stringstream src;
  src << in.rdbuf();

  Report r(c, out, err);
  try {
    Ast ast = parse(src.str());
    std::vector<MomentGoal> goals;
    try {
      for (const auto& g : c.goals) goals.push_back(MomentGoal::parse(g));
    } catch (const AnalysisError& e) {
      throw UsageError(e.what());
    }
    if (c.goals.empty())
      for (const auto& v : ast.variables) goals.push_back(MomentGoal::raw(Monomial::var(v)));

    if (c.simulate)
      run_simulation(c, ast, goals, r);
    else if (c.synth_unsolv_inv || c.synth_solv_loop)
      run_synthesis(c, ast, r);
    else
      run_analysis(c, ast, goals, r);
  } catch (const UsageError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  } catch (const AnalysisError& e) {
    r.error(e);
  }
  r.finish();
  return r.failed() ? kExitAnalysis : kExitOk;
}

int main_with_args(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  // The sensitivity flags are also accepted with a single dash.
  std::vector<std::string> args;
  for (int i = 0; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "-sens_diff" || a == "-sens") a = "-" + a;
    args.push_back(a);
  }
  std::vector<const char*> ptrs;
  for (const auto& a : args) ptrs.push_back(a.c_str());

  RunConfig c;
  CLI::App app{"Moment-based analysis of probabilistic loops"};
  app.add_option("benchmark", c.benchmark, "program file")->required();
  app.add_option("--goals", c.goals, "moments such as E(x**2), c2(x), k3(x)");
  app.add_flag("--invariants", c.invariants, "moment invariant ideal over the goals");
  app.add_flag("--after_loop", c.after_loop, "moments after termination of a guarded loop");
  app.add_option("--sens_diff", c.sens_diff, "sensitivity by differentiating closed forms");
  app.add_option("--sens", c.sens, "sensitivity via sensitivity recurrences");
  app.add_flag("--synth_unsolv_inv", c.synth_unsolv_inv, "combinations of defective variables with closed forms");
  app.add_flag("--synth_solv_loop", c.synth_solv_loop, "solvable loops over those combinations");
  app.add_option("--inv_deg", c.inv_deg, "degree bound for combinations")->check(CLI::PositiveNumber);
  std::string format = "text";
  app.add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
  app.add_flag("--dump", c.dump, "print the recurrence systems");
  app.add_option("--simulate", c.simulate, "simulate N iterations instead of solving");
  app.add_option("--samples", c.samples, "number of simulated runs");
  app.add_option("--seed", c.seed, "simulation seed");
  app.add_option("--bind", c.bind, "parameter values such as p=1/2");
  app.add_option("--csv", c.csv, "write simulated traces to a CSV file");
  try {
    app.parse(static_cast<int>(ptrs.size()), ptrs.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "usage: " << e.what() << "\n";
    return kExitUsage;
  }
  c.format = format == "json" ? RunConfig::Format::Json : RunConfig::Format::Text;
  return run(c, out, err);
}

}  // namespace loopm
