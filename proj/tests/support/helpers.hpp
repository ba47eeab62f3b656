#pragma once

#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "loopm/frontend.hpp"
#include "loopm/invariants.hpp"
#include "loopm/recurrences.hpp"
#include "loopm/solver.hpp"

namespace loopm::testing {

inline std::string corpus_path(const std::string& name) { return std::string(LOOPM_CORPUS_DIR) + "/" + name + ".prob"; }

inline Ast load(const std::string& name) {
  std::ifstream in(corpus_path(name));
  std::stringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

/// Polynomial from text. `vars` become ring variables (renamed through
/// `rename`), every other identifier is a parameter.
inline Poly poly_of(const std::string& text, const std::vector<std::string>& vars,
                    const std::map<std::string, std::string>& rename = {}) {
  std::string src;
  for (const auto& v : vars) src += v + " = 0\n";
  src += "zz = " + text + "\nwhile true:\n  zz = zz\nend\n";
  Ast ast = parse(src);
  Poly p = ast.poly(*ast.init.back().assign.rhs[0].choices[0].value);
  std::map<std::string, Poly> sub;
  for (const auto& [from, to] : rename) sub[from] = Poly::var(to);
  return p.substitute(sub);
}

/// Goal polynomial in moment symbols, written with plain names: "Ex" -> E(x).
inline Poly moment_poly(const std::string& text, const std::map<std::string, std::string>& symbols) {
  std::vector<std::string> vars;
  for (const auto& [k, v] : symbols) vars.push_back(k);
  return poly_of(text, vars, symbols);
}

/// Closed form of a goal string such as "E(x**2)" or "c2(x)".
inline ExpPoly goal_form(const Ast& ast, const std::string& goal_text) {
  MomentGoal goal = MomentGoal::parse(goal_text);
  MomentTransformer t(ast);
  auto raws = goal.raw_monomials();
  auto forms = solve_cfinite(extract_recurrences(t, raws));
  std::vector<std::pair<std::string, ExpPoly>> subs;
  for (const auto& m : raws) subs.emplace_back(moment_symbol(m), combine(t.reduce(Poly::term(m, RatFunc(1))), forms));
  return substitute_forms(goal_polynomial(goal), subs);
}

/// Closed form built from text in n: "2*n*(1 - p)".
inline ExpPoly poly_form(const std::string& text) { return ExpPoly(poly_of(text, {"n"})); }

inline RatFunc value_at(const ExpPoly& f, unsigned n) {
  QuadExt v = f.value(n);
  return v.a();
}

}  // namespace loopm::testing
