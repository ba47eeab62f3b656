#include "loopm/recurrences.hpp"

#include <deque>
#include <sstream>

#include "loopm/errors.hpp"
#include "loopm/frontend.hpp"
#include "loopm/limits.hpp"
#include "loopm/upoly.hpp"

namespace loopm {

namespace {

using Valuation = std::map<std::string, Rational>;

Rational eval_expr(const Ast& ast, const Expr& e, const Valuation& val) {
  Poly p = ast.poly(e);
  Rational out = 0;
  for (const auto& [m, c] : p.terms()) {
    auto q = c.as_rational();
    if (!q)
      throw AnalysisError(ErrorKind::NotFinite, "recurrences", "condition compares against a symbolic parameter",
                          "R2");
    Rational t = *q;
    for (const auto& [v, k] : m.factors()) t *= pow(val.at(v), k);
    out += t;
  }
  return out;
}

bool eval_bool(const Ast& ast, const BoolExpr& b, const Valuation& val) {
  switch (b.kind) {
    case BoolExpr::Kind::True:
      return true;
    case BoolExpr::Kind::False:
      return false;
    case BoolExpr::Kind::And:
      return eval_bool(ast, *b.left, val) && eval_bool(ast, *b.right, val);
    case BoolExpr::Kind::Or:
      return eval_bool(ast, *b.left, val) || eval_bool(ast, *b.right, val);
    case BoolExpr::Kind::Not:
      return !eval_bool(ast, *b.left, val);
    case BoolExpr::Kind::Cmp: {
      int c = cmp(eval_expr(ast, *b.lhs, val), eval_expr(ast, *b.rhs, val));
      switch (b.op) {
        case BoolExpr::Op::Eq: return c == 0;
        case BoolExpr::Op::Ne: return c != 0;
        case BoolExpr::Op::Lt: return c < 0;
        case BoolExpr::Op::Le: return c <= 0;
        case BoolExpr::Op::Gt: return c > 0;
        case BoolExpr::Op::Ge: return c >= 0;
      }
    }
  }
  return false;
}

/// Lagrange basis polynomial in v that is 1 at a and 0 on the rest of the support.
Poly lagrange(const std::string& v, const Rational& a, const std::set<Rational>& support) {
  Poly out(1);
  for (const auto& b : support) {
    if (b == a) continue;
    out = out * (Poly::var(v) - Poly(RatFunc(b))).scaled(RatFunc(1 / (a - b)));
  }
  return out;
}

Rational binomial(unsigned n, unsigned k) {
  Rational out = 1;
  for (unsigned i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

void check_size(const Poly& p) {
  if (p.size() > ResourceLimits::current().max_poly_terms)
    throw AnalysisError(ErrorKind::ResourceLimit, "recurrences", "polynomial exceeds the term limit");
}

}  // namespace

Poly iverson_poly(const BoolExpr& cond, const Ast& ast, const FiniteSupports& supports) {
  std::set<std::string> names;
  cond.collect_vars(names);
  std::vector<std::string> vars;
  for (const auto& v : names) {
    if (ast.is_param(v))
      throw AnalysisError(ErrorKind::NotFinite, "recurrences", "condition reads parameter '" + v + "'", "R2");
    if (!supports.count(v))
      throw AnalysisError(ErrorKind::NotFinite, "recurrences",
                          "condition reads variable '" + v + "' without finite support", "R2");
    vars.push_back(v);
  }
  std::vector<std::vector<Rational>> domains;
  for (const auto& v : vars) domains.emplace_back(supports.at(v).begin(), supports.at(v).end());
  for (const auto& d : domains)
    if (d.empty()) return Poly();
  Poly out;
  std::vector<std::size_t> idx(vars.size(), 0);
  Valuation val;
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) val[vars[i]] = domains[i][idx[i]];
    if (eval_bool(ast, cond, val)) {
      Poly term(1);
      for (const auto& v : vars) term = term * lagrange(v, val[v], supports.at(v));
      out += term;
    }
    std::size_t k = 0;
    while (k < vars.size() && ++idx[k] == domains[k].size()) idx[k++] = 0;
    if (k == vars.size()) break;
  }
  return out;
}

std::string StateKey::str() const {
  std::string base = moment_symbol(monomial);
  return derivative ? "d" + base : base;
}

std::size_t RecurrenceSystem::index_of(const StateKey& key) const {
  for (std::size_t i = 0; i < state.size(); ++i)
    if (state[i] == key) return i;
  throw AnalysisError(ErrorKind::InvalidArgument, "recurrences", key.str() + " is not in the recurrence state");
}

std::vector<std::vector<RatFunc>> RecurrenceSystem::iterate(std::size_t steps) const {
  std::vector<std::vector<RatFunc>> out{initial};
  for (std::size_t s = 0; s < steps; ++s) out.push_back(mat_vec(matrix, out.back()));
  return out;
}

std::string RecurrenceSystem::dump() const {
  std::ostringstream os;
  for (std::size_t i = 0; i < state.size(); ++i) {
    Poly row;
    for (std::size_t j = 0; j < state.size(); ++j) row.add_term(Monomial::var(state[j].str()), matrix[i][j]);
    os << state[i].str() << "' = " << row.str() << "    [init " << initial[i].str() << "]\n";
  }
  return os.str();
}

MomentTransformer::MomentTransformer(const Ast& ast) {
  ast_ = normalize(ast);
  SupportMap supports = analyze_supports(ast_);
  for (const auto& [v, s] : supports)
    if (s) finite_[v] = *s;
  defective_ = defective_variables(ast_, supports);
  // z^k mod prod (z - a) for each finite variable.
  for (const auto& [v, s] : finite_) {
    UPoly<Rational> vanish = UPoly<Rational>::constant(1);
    for (const auto& a : s) vanish = vanish * UPoly<Rational>::linear(a);
    auto& table = power_tables_[v];
    for (unsigned k = 0; k <= 2 * s.size() + 2; ++k) {
      UPoly<Rational> r = UPoly<Rational>::monomial(k) % vanish;
      Poly p;
      for (std::size_t i = 0; i < r.coeffs().size(); ++i)
        p.add_term(Monomial::var(v, static_cast<unsigned>(i)), RatFunc(r.coeffs()[i]));
      table.push_back(p);
    }
  }
}

Poly MomentTransformer::reduce(const Poly& p) const {
  bool needed = false;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.factors()) {
      auto it = finite_.find(v);
      if (it != finite_.end() && e >= it->second.size()) needed = true;
    }
  if (!needed) return p;
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Monomial::Factor> kept;
    Poly factor(1);
    for (const auto& [v, e] : m.factors()) {
      auto it = finite_.find(v);
      if (it == finite_.end() || e < it->second.size()) {
        kept.emplace_back(v, e);
        continue;
      }
      const auto& table = power_tables_.at(v);
      if (e < table.size()) {
        factor = factor * table[e];
      } else {
        // Walk down using v^e = v^(e-1) * v.
        Poly acc = table.back();
        for (std::size_t k = table.size(); k <= e; ++k) acc = reduce(acc * Poly::var(v));
        factor = factor * acc;
      }
    }
    out += factor.times(Monomial::from_factors(kept)).scaled(c);
  }
  return reduce(out);
}

Poly MomentTransformer::rhs_moment(const Rhs& rhs, unsigned k) const {
  if (rhs.draw) {
    const auto& d = *rhs.draw;
    Poly shift = d.shift ? ast_.poly(*d.shift) : Poly();
    Poly out;
    for (unsigned j = 0; j <= k; ++j) {
      if (shift.is_zero() && j > 0) break;
      RatFunc m = raw_moment(ast_, d, k - j);
      if (m.is_zero()) continue;
      out += shift.pow(j).scaled(m * RatFunc(binomial(k, j)));
    }
    return out;
  }
  Poly out;
  for (const auto& b : rhs.choices) out += ast_.poly(*b.value).pow(k).scaled(b.prob);
  return out;
}

Poly MomentTransformer::transform_assign(const Assignment& a, const Poly& p) const {
  bool touched = false;
  for (const auto& t : a.targets)
    if (p.contains(t)) touched = true;
  if (!touched) return p;
  std::map<std::pair<std::size_t, unsigned>, Poly> cache;
  auto moment = [&](std::size_t i, unsigned k) -> const Poly& {
    auto key = std::make_pair(i, k);
    auto it = cache.find(key);
    if (it != cache.end()) return it->second;
    return cache.emplace(key, rhs_moment(a.rhs[i], k)).first->second;
  };
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    std::vector<Monomial::Factor> others;
    Poly term(c);
    for (const auto& [v, e] : m.factors()) {
      auto pos = std::find(a.targets.begin(), a.targets.end(), v);
      if (pos == a.targets.end())
        others.emplace_back(v, e);
      else
        term = term * moment(static_cast<std::size_t>(pos - a.targets.begin()), e);
    }
    out += term.times(Monomial::from_factors(std::move(others)));
  }
  return out;
}

Poly MomentTransformer::transform_block(const Block& block, const Poly& p) const {
  Poly cur = p;
  for (auto it = block.rbegin(); it != block.rend(); ++it) {
    if (it->kind == Statement::Kind::Assign) {
      cur = transform_assign(it->assign, cur);
    } else {
      Poly then_p = transform_block(it->then_body, cur);
      Poly else_p = transform_block(it->else_body, cur);
      if (then_p == else_p) {
        cur = then_p;
      } else {
        auto found = iverson_cache_.find(it->cond.get());
        if (found == iverson_cache_.end())
          found = iverson_cache_.emplace(it->cond.get(), iverson_poly(*it->cond, ast_, finite_)).first;
        const Poly& ind = found->second;
        cur = ind * then_p + (Poly(1) - ind) * else_p;
      }
    }
    cur = reduce(cur);
    check_size(cur);
  }
  return cur;
}

Poly MomentTransformer::step_poly(const Poly& p) { return transform_block(ast_.body, p); }

const Poly& MomentTransformer::step(const Monomial& m) {
  auto it = step_cache_.find(m);
  if (it != step_cache_.end()) return it->second;
  return step_cache_.emplace(m, step_poly(reduce(Poly::term(m, RatFunc(1))))).first->second;
}

RatFunc MomentTransformer::initial(const Poly& p) const {
  Poly after = transform_block(ast_.init, p);
  std::map<std::string, Poly> zero;
  for (const auto& v : after.variables()) zero[v] = Poly();
  return after.substitute(zero).constant_term();
}

RecurrenceRow as_row(const Poly& p, bool derivative) {
  RecurrenceRow row;
  for (const auto& m : p.sorted_monomials()) row.emplace_back(StateKey{m, derivative}, p.coefficient(m));
  return row;
}

RecurrenceSystem close_system(const std::vector<StateKey>& seeds,
                              const std::function<RecurrenceRow(const StateKey&)>& row,
                              const std::function<RatFunc(const StateKey&)>& initial) {
  std::size_t cap = ResourceLimits::current().max_closure_monomials;
  std::map<StateKey, std::size_t> index;
  std::vector<StateKey> order;
  std::vector<RecurrenceRow> rows;
  std::deque<StateKey> work;
  auto enqueue = [&](const StateKey& k) {
    if (index.count(k)) return;
    if (order.size() >= cap)
      throw AnalysisError(ErrorKind::ResourceLimit, "recurrences",
                          "monomial closure exceeds " + std::to_string(cap) + " states");
    index[k] = order.size();
    order.push_back(k);
    work.push_back(k);
  };
  for (const auto& s : seeds) enqueue(s);
  rows.resize(0);
  std::map<StateKey, RecurrenceRow> computed;
  while (!work.empty()) {
    StateKey k = work.front();
    work.pop_front();
    RecurrenceRow r = row(k);
    for (const auto& [key, c] : r) enqueue(key);
    computed[k] = std::move(r);
  }
  RecurrenceSystem sys;
  sys.state = order;
  std::size_t n = order.size();
  sys.matrix.assign(n, std::vector<RatFunc>(n));
  for (std::size_t i = 0; i < n; ++i)
    for (const auto& [key, c] : computed[order[i]]) sys.matrix[i][index.at(key)] += c;
  for (const auto& k : order) sys.initial.push_back(initial(k));
  return sys;
}

RecurrenceSystem extract_recurrences(MomentTransformer& t, const std::vector<Monomial>& goals) {
  auto check = [&](const Monomial& m) {
    std::string bad;
    for (const auto& [v, e] : m.factors())
      if (t.defective().count(v)) bad += (bad.empty() ? "" : ", ") + v;
    if (!bad.empty())
      throw AnalysisError(ErrorKind::DefectiveDependency, "recurrences",
                          "moments of " + moment_symbol(m) + " depend on defective variables {" + bad +
                              "} through a non-linear cycle",
                          "R3");
  };
  std::vector<StateKey> seeds;
  for (const auto& g : goals) {
    for (const auto& [v, e] : g.factors())
      if (!std::count(t.program().variables.begin(), t.program().variables.end(), v))
        throw AnalysisError(ErrorKind::InvalidArgument, "recurrences", "'" + v + "' is not a program variable");
    Poly reduced = t.reduce(Poly::term(g, RatFunc(1)));
    for (const auto& [m, c] : reduced.terms()) seeds.push_back({m, false});
  }
  return close_system(
      seeds,
      [&](const StateKey& k) {
        check(k.monomial);
        RecurrenceRow r = as_row(t.step(k.monomial));
        for (const auto& [key, c] : r) check(key.monomial);
        return r;
      },
      [&](const StateKey& k) { return t.initial(Poly::term(k.monomial, RatFunc(1))); });
}

RecurrenceSystem extract_recurrences(const Ast& ast, const std::vector<Monomial>& goals) {
  MomentTransformer t(ast);
  return extract_recurrences(t, goals);
}

}  // namespace loopm
