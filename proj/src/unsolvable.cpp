#include "loopm/unsolvable.hpp"

#include <algorithm>
#include <map>

#include "loopm/errors.hpp"
#include "loopm/frontend.hpp"

namespace loopm {

namespace {

bool touches(const Monomial& m, const std::set<std::string>& vars) {
  return std::any_of(m.factors().begin(), m.factors().end(),
                     [&](const auto& f) { return vars.count(f.first) > 0; });
}

/// Monomials of degree 1..d over vars, by degree then display order.
std::vector<Monomial> monomials_up_to(const std::vector<std::string>& vars, unsigned d) {
  std::vector<Monomial> out;
  std::vector<Monomial> layer{Monomial{}};
  for (unsigned k = 1; k <= d; ++k) {
    std::set<Monomial> next;
    for (const auto& m : layer)
      for (const auto& v : vars) next.insert(m * Monomial::var(v));
    std::vector<Monomial> sorted(next.begin(), next.end());
    std::sort(sorted.begin(), sorted.end(), display_greater);
    out.insert(out.end(), sorted.begin(), sorted.end());
    layer = sorted;
  }
  return out;
}

}  // namespace

std::string CombinationCandidate::str() const {
  Poly rhs = Poly::var("s").scaled(lambda.as_ratfunc()) + inhomogeneous;
  if (lambda.is_surd()) rhs = reduce_surds(lambda.as_quad().to_poly() * Poly::var("s") + inhomogeneous);
  return "E(" + S.str() + ") satisfies s' = " + rhs.str();
}

std::set<std::string> find_defective(const Ast& ast) { return check_restrictions(ast).defective; }

CombinationSearch synthesize_combinations(const Ast& ast, unsigned degree) {
  if (degree < 1) throw AnalysisError(ErrorKind::InvalidArgument, "unsolvable", "degree bound must be at least 1");
  MomentTransformer t(ast);
  const std::set<std::string>& defective = t.defective();
  if (defective.empty())
    throw AnalysisError(ErrorKind::NotUnsolvable, "unsolvable", "the loop has no defective variables");

  std::vector<std::string> vars;
  for (const auto& v : t.program().variables)
    if (defective.count(v)) vars.push_back(v);
  std::vector<Monomial> basis = monomials_up_to(vars, degree);
  std::map<Monomial, std::size_t> index;
  for (std::size_t i = 0; i < basis.size(); ++i) index[basis[i]] = i;
  std::size_t k = basis.size();

  // trans[b][a]: coefficient of basis[b] in E(basis[a]'); constraint rows
  // collect defective monomials outside the basis.
  Matrix<RatFunc> trans(k, std::vector<RatFunc>(k));
  std::map<Monomial, std::vector<RatFunc>> constraints;
  std::vector<Poly> inhom(k);
  for (std::size_t a = 0; a < k; ++a) {
    const Poly& next = t.step(basis[a]);
    for (const auto& [m, c] : next.terms()) {
      auto it = index.find(m);
      if (it != index.end()) {
        trans[it->second][a] += c;
      } else if (touches(m, defective)) {
        auto& row = constraints[m];
        row.resize(k);
        row[a] += c;
      } else {
        inhom[a] += Poly::term(m, c);
      }
    }
  }

  CombinationSearch out;
  std::vector<RatFunc> hints;
  for (std::size_t i = 0; i < k; ++i) hints.push_back(trans[i][i]);
  std::vector<std::pair<BaseValue, unsigned>> roots;
  try {
    roots = roots_with_multiplicity(charpoly(trans), hints);
  } catch (const AnalysisError& e) {
    if (e.kind() != ErrorKind::UnsupportedEigenvalue) throw;
    out.notes.push_back(std::string("skipped eigenvalues: ") + e.what());
    return out;
  }
  for (const auto& [lambda, mult] : roots) {
    if (lambda.is_zero()) {
      out.notes.push_back("skipped eigenvalue 0: such combinations carry no recurrence of their own");
      continue;
    }
    if (lambda.is_surd()) {
      out.notes.push_back("skipped irrational eigenvalue " + lambda.str());
      continue;
    }
    RatFunc l = lambda.as_ratfunc();
    Matrix<RatFunc> sys = trans;
    for (std::size_t i = 0; i < k; ++i) sys[i][i] -= l;
    for (const auto& [m, row] : constraints) sys.push_back(row);
    for (auto c : nullspace(sys, k)) {
      std::size_t first = 0;
      while (first < k && c[first].is_zero()) ++first;
      if (first == k) continue;
      RatFunc scale = c[first].inverse();
      CombinationCandidate cand;
      cand.lambda = lambda;
      for (std::size_t i = 0; i < k; ++i) {
        if (c[i].is_zero()) continue;
        RatFunc ci = c[i] * scale;
        cand.S += Poly::term(basis[i], ci);
        cand.inhomogeneous += inhom[i].scaled(ci);
      }
      out.candidates.push_back(std::move(cand));
    }
  }
  std::stable_sort(out.candidates.begin(), out.candidates.end(),
                   [](const CombinationCandidate& a, const CombinationCandidate& b) {
                     if (a.S.degree() != b.S.degree()) return a.S.degree() < b.S.degree();
                     return a.lambda < b.lambda;
                   });
  return out;
}

std::string combination_variable(const Ast& ast) {
  auto taken = [&](const std::string& s) {
    return ast.is_param(s) || std::count(ast.variables.begin(), ast.variables.end(), s) > 0;
  };
  std::string name = "s";
  for (int i = 1; taken(name); ++i) name = "s" + std::to_string(i);
  return name;
}

Ast synth_solvable_loop(const Ast& ast, const CombinationCandidate& cand) {
  MomentTransformer t(ast);
  const std::string s = combination_variable(ast);

  // Non-defective variables the inhomogeneous part needs, closed under the
  // expected one-step updates.
  std::set<std::string> kept = cand.inhomogeneous.variables();
  for (auto it = kept.begin(); it != kept.end();)
    it = t.program().is_param(*it) ? kept.erase(it) : std::next(it);
  std::map<std::string, Poly> updates;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& v : std::set<std::string>(kept)) {
      if (updates.count(v)) continue;
      updates[v] = t.step(Monomial::var(v));
      for (const auto& w : updates[v].variables())
        if (!t.program().is_param(w) && kept.insert(w).second) changed = true;
      changed = true;
    }
  }
  std::vector<std::string> order;
  for (const auto& v : t.program().variables)
    if (kept.count(v)) order.push_back(v);

  auto assign = [](std::vector<std::string> targets, std::vector<ExprPtr> values) {
    Assignment a;
    a.targets = std::move(targets);
    for (auto& v : values) a.rhs.push_back(Rhs{{Branch{std::move(v), RatFunc(1)}}, std::nullopt});
    return Statement::assignment(std::move(a));
  };

  Ast out;
  Poly s_poly = Poly::var(s);
  RatFunc s0 = t.initial(cand.S);
  out.init.push_back(assign({s}, {Expr::from_ratfunc(s0)}));
  for (const auto& v : order)
    out.init.push_back(assign({v}, {Expr::from_ratfunc(t.initial(Poly::var(v)))}));

  Poly next_s = reduce_surds(cand.lambda.as_quad().to_poly() * s_poly + cand.inhomogeneous);
  out.body.push_back(assign({s}, {Expr::from_poly(next_s)}));
  if (!order.empty()) {
    std::vector<ExprPtr> values;
    for (const auto& v : order) values.push_back(Expr::from_poly(updates[v]));
    out.body.push_back(assign(order, values));
  }
  // Round trip through the printer settles params and variable order.
  return parse(print_program(out));
}

ExpPoly solve_combination(const Ast& ast, const CombinationCandidate& cand) {
  Ast loop = synth_solvable_loop(ast, cand);
  Monomial sm = Monomial::var(combination_variable(ast));
  auto forms = solve_cfinite(extract_recurrences(loop, {sm}));
  return forms.at({sm, false});
}

}  // namespace loopm
