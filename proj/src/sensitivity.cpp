#include "loopm/sensitivity.hpp"

#include <algorithm>
#include <map>

#include "loopm/errors.hpp"
#include "loopm/invariants.hpp"

namespace loopm {

namespace {

void collect_rhs_vars(const Ast& ast, const Rhs& rhs, std::set<std::string>& reads, bool& tainted,
                      const std::string& param) {
  auto visit = [&](const ExprPtr& e) {
    if (!e) return;
    std::set<std::string> vs;
    e->collect_vars(vs);
    for (const auto& v : vs) {
      if (v == param)
        tainted = true;
      else if (!ast.is_param(v))
        reads.insert(v);
    }
  };
  for (const auto& b : rhs.choices) {
    visit(b.value);
    if (b.prob.parameters().count(param)) tainted = true;
  }
  if (rhs.draw) {
    for (const auto& a : rhs.draw->args) visit(a);
    visit(rhs.draw->shift);
  }
}

void collect_cond_vars(const Ast& ast, const BoolExpr& cond, std::set<std::string>& reads, bool& tainted,
                       const std::string& param) {
  std::set<std::string> vs;
  cond.collect_vars(vs);
  for (const auto& v : vs) {
    if (v == param)
      tainted = true;
    else if (!ast.is_param(v))
      reads.insert(v);
  }
}

struct DepGraph {
  std::map<std::string, std::set<std::string>> reads;
  std::set<std::string> tainted;
};

void walk(const Ast& ast, const Block& block, std::set<std::string> control, bool control_tainted,
          const std::string& param, DepGraph& g) {
  for (const auto& s : block) {
    if (s.kind == Statement::Kind::Assign) {
      for (std::size_t i = 0; i < s.assign.targets.size(); ++i) {
        const std::string& t = s.assign.targets[i];
        bool tainted = control_tainted;
        auto& reads = g.reads[t];
        reads.insert(control.begin(), control.end());
        collect_rhs_vars(ast, s.assign.rhs[i], reads, tainted, param);
        if (tainted) g.tainted.insert(t);
      }
      continue;
    }
    std::set<std::string> inner = control;
    bool inner_tainted = control_tainted;
    collect_cond_vars(ast, *s.cond, inner, inner_tainted, param);
    walk(ast, s.then_body, inner, inner_tainted, param, g);
    walk(ast, s.else_body, inner, inner_tainted, param, g);
  }
}

bool over(const Monomial& m, const std::set<std::string>& vars) {
  return std::all_of(m.factors().begin(), m.factors().end(),
                     [&](const auto& f) { return vars.count(f.first) > 0; });
}

}  // namespace

ExpPoly diff_closed_form(const ExpPoly& cf, const std::string& param) { return diff(cf, param); }

std::set<std::string> param_independent_vars(const Ast& ast, const std::string& param) {
  DepGraph g;
  walk(ast, ast.init, {}, false, param, g);
  std::set<std::string> guard_reads;
  bool guard_tainted = false;
  if (ast.guard) collect_cond_vars(ast, *ast.guard, guard_reads, guard_tainted, param);
  walk(ast, ast.body, guard_reads, guard_tainted, param, g);

  // Backward propagation of taint along read edges to a fixpoint.
  std::set<std::string> bad = g.tainted;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [v, rs] : g.reads) {
      if (bad.count(v)) continue;
      if (std::any_of(rs.begin(), rs.end(), [&](const std::string& r) { return bad.count(r) > 0; })) {
        bad.insert(v);
        changed = true;
      }
    }
  }
  std::set<std::string> out;
  for (const auto& v : ast.variables)
    if (!bad.count(v)) out.insert(v);
  return out;
}

RecurrenceSystem sensitivity_system(MomentTransformer& t, const std::vector<Monomial>& monomials,
                                    const std::string& param, bool need_plain) {
  std::set<std::string> independent = param_independent_vars(t.program(), param);
  auto defective_in = [&](const Monomial& m) {
    std::string bad;
    for (const auto& [v, e] : m.factors())
      if (t.defective().count(v)) bad += (bad.empty() ? "" : ", ") + v;
    return bad;
  };
  auto reject = [&](const StateKey& k, const std::string& bad) {
    throw AnalysisError(ErrorKind::DefectiveDependency, "sensitivity",
                        "the sensitivity recurrences need " + k.str() + ", which depends on defective variables {" +
                            bad + "}",
                        "R3");
  };
  std::vector<StateKey> seeds;
  for (const auto& g : monomials) {
    Poly reduced = t.reduce(Poly::term(g, RatFunc(1)));
    for (const auto& [m, c] : reduced.terms()) {
      if (!over(m, independent)) seeds.push_back({m, true});
      if (need_plain) seeds.push_back({m, false});
    }
  }
  auto row = [&](const StateKey& k) -> RecurrenceRow {
    std::string bad = defective_in(k.monomial);
    if (!k.derivative) {
      if (!bad.empty()) reject(k, bad);
      return as_row(t.step(k.monomial));
    }
    const Poly& next = t.step(k.monomial);
    RecurrenceRow r;
    for (const auto& m : next.sorted_monomials()) {
      RatFunc c = next.coefficient(m);
      RatFunc dc = c.derivative(param);
      if (!dc.is_zero()) {
        std::string b = defective_in(m);
        if (!b.empty()) reject({m, false}, b);
        r.emplace_back(StateKey{m, false}, dc);
      }
      if (!over(m, independent)) r.emplace_back(StateKey{m, true}, c);
    }
    return r;
  };
  auto initial = [&](const StateKey& k) {
    RatFunc v = t.initial(Poly::term(k.monomial, RatFunc(1)));
    return k.derivative ? v.derivative(param) : v;
  };
  try {
    return close_system(seeds, row, initial);
  } catch (const AnalysisError& e) {
    if (e.kind() != ErrorKind::ResourceLimit) throw;
    throw AnalysisError(ErrorKind::DefectiveDependency, "sensitivity",
                        "sensitivity recurrences do not close: defective monomials survive the zeroing of "
                        "parameter-independent moments",
                        "R3");
  }
}

ExpPoly solve_sensitivity(const Ast& ast, const SensitivityGoal& goal) {
  MomentTransformer t(ast);
  std::vector<Monomial> raws = goal.goal.raw_monomials();
  Poly gp = goal_polynomial(goal.goal);

  auto form_of = [&](const Monomial& m, const std::map<StateKey, ExpPoly>& forms, bool derivative) {
    return combine(t.reduce(Poly::term(m, RatFunc(1))), forms, derivative);
  };

  try {
    RecurrenceSystem sys = extract_recurrences(t, raws);
    auto forms = solve_cfinite(sys);
    std::vector<std::pair<std::string, ExpPoly>> subs;
    for (const auto& m : raws) subs.emplace_back(moment_symbol(m), form_of(m, forms, false));
    return diff_closed_form(substitute_forms(gp, subs), goal.param);
  } catch (const AnalysisError& e) {
    if (e.kind() != ErrorKind::DefectiveDependency) throw;
  }

  bool nonlinear = gp.degree() > 1;
  RecurrenceSystem sys = sensitivity_system(t, raws, goal.param, nonlinear);
  auto forms = solve_cfinite(sys);
  std::vector<std::pair<std::string, ExpPoly>> plain;
  if (nonlinear)
    for (const auto& m : raws) plain.emplace_back(moment_symbol(m), form_of(m, forms, false));
  // Chain rule over the moment symbols of the goal.
  ExpPoly out;
  std::set<std::string> independent = param_independent_vars(ast, goal.param);
  for (const auto& m : raws) {
    Poly partial = gp.derivative(moment_symbol(m));
    if (partial.is_zero()) continue;
    ExpPoly dm;
    Poly reduced = t.reduce(Poly::term(m, RatFunc(1)));
    for (const auto& [rm, c] : reduced.terms())
      if (!over(rm, independent)) dm += forms.at({rm, true}).scaled(c);
    out += (partial.is_constant() ? ExpPoly(partial.constant_term()) : substitute_forms(partial, plain)) * dm;
  }
  return out;
}

}  // namespace loopm
