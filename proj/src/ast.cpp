#include "loopm/ast.hpp"

#include "loopm/errors.hpp"

namespace loopm {

ExprPtr Expr::number(const Rational& v) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Number;
  e->value = v;
  return e;
}

ExprPtr Expr::var(const std::string& name) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Var;
  e->name = name;
  return e;
}

ExprPtr Expr::binary(Kind kind, ExprPtr a, ExprPtr b) {
  auto e = std::make_shared<Expr>();
  e->kind = kind;
  e->lhs = std::move(a);
  e->rhs = std::move(b);
  return e;
}

ExprPtr Expr::neg(ExprPtr a) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Neg;
  e->lhs = std::move(a);
  return e;
}

ExprPtr Expr::power(ExprPtr base, unsigned exponent) {
  auto e = std::make_shared<Expr>();
  e->kind = Kind::Pow;
  e->lhs = std::move(base);
  e->exponent = exponent;
  return e;
}

namespace {

ExprPtr from_rational(const Rational& q) {
  Rational a = abs(q);
  ExprPtr e = is_integer(a) ? Expr::number(a)
                            : Expr::binary(Expr::Kind::Div, Expr::number(Rational(a.get_num())),
                                           Expr::number(Rational(a.get_den())));
  return sgn(q) < 0 ? Expr::neg(e) : e;
}

ExprPtr from_monomial(const Monomial& m) {
  ExprPtr out;
  for (const auto& [v, k] : m.factors()) {
    ExprPtr f = k == 1 ? Expr::var(v) : Expr::power(Expr::var(v), k);
    out = out ? Expr::binary(Expr::Kind::Mul, out, f) : f;
  }
  return out;
}

/// Splits a leading minus off so sums render as a - b.
std::pair<bool, ExprPtr> signed_term(const RatFunc& c, const Monomial& m) {
  ExprPtr mono = from_monomial(m);
  if (c.is_rational()) {
    Rational q = *c.as_rational();
    bool negative = sgn(q) < 0;
    Rational a = abs(q);
    if (!mono) return {negative, from_rational(a)};
    if (a == 1) return {negative, mono};
    if (is_integer(a)) return {negative, Expr::binary(Expr::Kind::Mul, Expr::number(a), mono)};
    return {negative, Expr::binary(Expr::Kind::Mul, from_rational(a), mono)};
  }
  ExprPtr coeff = Expr::from_ratfunc(c);
  if (!mono) return {false, coeff};
  return {false, Expr::binary(Expr::Kind::Mul, coeff, mono)};
}

}  // namespace

ExprPtr Expr::from_poly(const Poly& poly) {
  if (poly.is_zero()) return number(0);
  // Polynomial parameter coefficients are spread into separate terms.
  Poly p;
  for (const auto& [m, c] : poly.terms()) {
    if (!c.is_polynomial() || c.is_rational()) {
      p.add_term(m, c);
      continue;
    }
    Rational d = c.den().constant_term();
    for (const auto& [pm, q] : c.num().terms()) p.add_term(m * pm, RatFunc(q / d));
  }
  ExprPtr out;
  for (const auto& m : p.sorted_monomials()) {
    auto [negative, term] = signed_term(p.coefficient(m), m);
    if (!out)
      out = negative ? neg(term) : term;
    else
      out = binary(negative ? Kind::Sub : Kind::Add, out, term);
  }
  return out;
}

ExprPtr Expr::from_ratfunc(const RatFunc& r) {
  if (r.is_rational()) return from_rational(*r.as_rational());
  auto lift = [](const QPoly& q) { return q.map_coefficients<RatFunc>([](const Rational& c) { return RatFunc(c); }); };
  ExprPtr num = from_poly(lift(r.num()));
  if (r.is_polynomial()) return num;
  return binary(Kind::Div, num, from_poly(lift(r.den())));
}

void Expr::collect_vars(std::set<std::string>& out) const {
  if (kind == Kind::Var) out.insert(name);
  if (lhs) lhs->collect_vars(out);
  if (rhs) rhs->collect_vars(out);
}

bool same_expr(const ExprPtr& a, const ExprPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool operator==(const Expr& a, const Expr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case Expr::Kind::Number:
      return a.value == b.value;
    case Expr::Kind::Var:
      return a.name == b.name;
    case Expr::Kind::Pow:
      return a.exponent == b.exponent && same_expr(a.lhs, b.lhs);
    default:
      return same_expr(a.lhs, b.lhs) && same_expr(a.rhs, b.rhs);
  }
}

void BoolExpr::collect_vars(std::set<std::string>& out) const {
  if (lhs) lhs->collect_vars(out);
  if (rhs) rhs->collect_vars(out);
  if (left) left->collect_vars(out);
  if (right) right->collect_vars(out);
}

bool same_bool(const BoolPtr& a, const BoolPtr& b) {
  if (!a || !b) return !a && !b;
  return *a == *b;
}

bool operator==(const BoolExpr& a, const BoolExpr& b) {
  if (a.kind != b.kind) return false;
  switch (a.kind) {
    case BoolExpr::Kind::True:
    case BoolExpr::Kind::False:
      return true;
    case BoolExpr::Kind::Cmp:
      return a.op == b.op && same_expr(a.lhs, b.lhs) && same_expr(a.rhs, b.rhs);
    default:
      return same_bool(a.left, b.left) && same_bool(a.right, b.right);
  }
}

std::string to_string(DistKind kind) {
  switch (kind) {
    case DistKind::Bernoulli: return "Bernoulli";
    case DistKind::Beta: return "Beta";
    case DistKind::Categorical: return "Categorical";
    case DistKind::DiscreteUniform: return "DiscreteUniform";
    case DistKind::Exponential: return "Exponential";
    case DistKind::Gamma: return "Gamma";
    case DistKind::Laplace: return "Laplace";
    case DistKind::Normal: return "Normal";
    case DistKind::TruncNormal: return "TruncNormal";
    case DistKind::Uniform: return "Uniform";
  }
  return "?";
}

std::optional<DistKind> parse_dist_kind(const std::string& name) {
  static const std::map<std::string, DistKind> table = {
      {"Bernoulli", DistKind::Bernoulli},   {"Beta", DistKind::Beta},
      {"Categorical", DistKind::Categorical}, {"DiscreteUniform", DistKind::DiscreteUniform},
      {"Exponential", DistKind::Exponential}, {"Gamma", DistKind::Gamma},
      {"Laplace", DistKind::Laplace},       {"Normal", DistKind::Normal},
      {"TruncNormal", DistKind::TruncNormal}, {"Uniform", DistKind::Uniform},
  };
  auto it = table.find(name);
  if (it == table.end()) return std::nullopt;
  return it->second;
}

std::size_t dist_arity(DistKind kind) {
  switch (kind) {
    case DistKind::Bernoulli:
    case DistKind::Exponential:
    case DistKind::Categorical:
      return 1;
    case DistKind::TruncNormal:
      return 4;
    default:
      return 2;
  }
}

bool operator==(const DistributionDraw& a, const DistributionDraw& b) {
  if (a.kind != b.kind || a.args.size() != b.args.size() || !same_expr(a.shift, b.shift)) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_expr(a.args[i], b.args[i])) return false;
  return true;
}

bool operator==(const Rhs& a, const Rhs& b) {
  if (a.draw.has_value() != b.draw.has_value()) return false;
  if (a.draw) return *a.draw == *b.draw;
  if (a.choices.size() != b.choices.size()) return false;
  for (std::size_t i = 0; i < a.choices.size(); ++i)
    if (!same_expr(a.choices[i].value, b.choices[i].value) || !(a.choices[i].prob == b.choices[i].prob))
      return false;
  return true;
}

Statement Statement::assignment(Assignment a, int line) {
  Statement s;
  s.kind = Kind::Assign;
  s.assign = std::move(a);
  s.line = line;
  return s;
}

Statement Statement::if_stmt(BoolPtr cond, Block then_body, Block else_body, int line) {
  Statement s;
  s.kind = Kind::If;
  s.cond = std::move(cond);
  s.then_body = std::move(then_body);
  s.else_body = std::move(else_body);
  s.line = line;
  return s;
}

bool operator==(const Statement& a, const Statement& b) {
  if (a.kind != b.kind) return false;
  if (a.kind == Statement::Kind::Assign)
    return a.assign.targets == b.assign.targets && a.assign.rhs == b.assign.rhs;
  return same_bool(a.cond, b.cond) && a.then_body == b.then_body && a.else_body == b.else_body;
}

bool operator==(const Ast& a, const Ast& b) {
  return a.init == b.init && same_bool(a.guard, b.guard) && a.body == b.body && a.params == b.params;
}

Poly Ast::poly(const Expr& e) const {
  switch (e.kind) {
    case Expr::Kind::Number:
      return Poly(RatFunc(e.value));
    case Expr::Kind::Var:
      return is_param(e.name) ? Poly(RatFunc::param(e.name)) : Poly::var(e.name);
    case Expr::Kind::Add:
      return poly(*e.lhs) + poly(*e.rhs);
    case Expr::Kind::Sub:
      return poly(*e.lhs) - poly(*e.rhs);
    case Expr::Kind::Mul:
      return poly(*e.lhs) * poly(*e.rhs);
    case Expr::Kind::Neg:
      return -poly(*e.lhs);
    case Expr::Kind::Pow:
      return poly(*e.lhs).pow(e.exponent);
    case Expr::Kind::Div: {
      Poly d = poly(*e.rhs);
      if (!d.is_constant())
        throw AnalysisError(ErrorKind::SyntaxError, "frontend", "division by a program variable is not polynomial");
      if (d.is_zero()) throw AnalysisError(ErrorKind::SyntaxError, "frontend", "division by zero");
      return poly(*e.lhs).scaled(d.constant_term().inverse());
    }
  }
  return {};
}

RatFunc Ast::constant(const Expr& e, const std::string& what) const {
  Poly p = poly(e);
  if (!p.is_constant())
    throw AnalysisError(ErrorKind::R1Violation, "frontend", what + " depends on program variables", "R1");
  return p.constant_term();
}

}  // namespace loopm
