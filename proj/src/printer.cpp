#include <sstream>

#include "loopm/frontend.hpp"

namespace loopm {

namespace {

int precedence(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Add:
    case Expr::Kind::Sub:
      return 1;
    case Expr::Kind::Mul:
    case Expr::Kind::Div:
      return 2;
    case Expr::Kind::Neg:
      return 3;
    case Expr::Kind::Pow:
      return 4;
    default:
      return 5;
  }
}

std::string number_text(const Rational& q) {
  if (is_integer(q)) return to_string(q);
  // Decimal when the denominator is 2^a 5^b, so "0.7" round-trips.
  Integer den = q.get_den();
  unsigned twos = 0, fives = 0;
  while (den % 2 == 0) {
    den /= 2;
    ++twos;
  }
  while (den % 5 == 0) {
    den /= 5;
    ++fives;
  }
  if (den != 1) return "(" + to_string(q) + ")";
  unsigned digits = std::max(twos, fives);
  Integer scale = 1;
  for (unsigned k = 0; k < digits; ++k) scale *= 10;
  Rational scaled = abs(q) * scale;
  std::string s = to_string(scaled.get_num());
  while (s.size() <= digits) s = "0" + s;
  s.insert(s.size() - digits, ".");
  return (sgn(q) < 0 ? "-" : "") + s;
}

std::string wrap(const Expr& e, int min_prec) {
  std::string s = print_expr(e);
  return precedence(e) < min_prec ? "(" + s + ")" : s;
}

const char* op_text(BoolExpr::Op op) {
  switch (op) {
    case BoolExpr::Op::Eq: return "==";
    case BoolExpr::Op::Ne: return "!=";
    case BoolExpr::Op::Lt: return "<";
    case BoolExpr::Op::Le: return "<=";
    case BoolExpr::Op::Gt: return ">";
    case BoolExpr::Op::Ge: return ">=";
  }
  return "==";
}

std::string bool_child(const BoolExpr& b) {
  std::string s = print_bool(b);
  if (b.kind == BoolExpr::Kind::And || b.kind == BoolExpr::Kind::Or || b.kind == BoolExpr::Kind::Cmp)
    return "(" + s + ")";
  return s;
}

std::string probability_text(const RatFunc& p) {
  if (auto q = p.as_rational()) return to_string(*q);
  return print_expr(*Expr::from_ratfunc(p));
}

std::string draw_text(const DistributionDraw& d) {
  std::vector<ExprPtr> args = d.args;
  if (d.shift) {
    auto add_shift = [&](ExprPtr& a) {
      bool zero = a->kind == Expr::Kind::Number && sgn(a->value) == 0;
      a = zero ? d.shift : Expr::binary(Expr::Kind::Add, d.shift, a);
    };
    add_shift(args[0]);
    if (d.kind == DistKind::Uniform || d.kind == DistKind::DiscreteUniform) add_shift(args[1]);
    if (d.kind == DistKind::TruncNormal) {
      add_shift(args[2]);
      add_shift(args[3]);
    }
  }
  std::string out = to_string(d.kind) + "(";
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ", ";
    out += print_expr(*args[i]);
  }
  return out + ")";
}

std::string rhs_text(const Rhs& r) {
  if (r.draw) return draw_text(*r.draw);
  if (r.choices.size() == 1 && is_one(r.choices.front().prob)) return print_expr(*r.choices.front().value);
  std::string out;
  for (const auto& c : r.choices) {
    if (!out.empty()) out += " ";
    out += print_expr(*c.value) + " {" + probability_text(c.prob) + "}";
  }
  return out;
}

void print_block(std::ostringstream& os, const Block& block, int indent) {
  std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  for (const auto& s : block) {
    if (s.kind == Statement::Kind::Assign) {
      os << pad;
      for (std::size_t i = 0; i < s.assign.targets.size(); ++i) os << (i ? ", " : "") << s.assign.targets[i];
      os << " = ";
      for (std::size_t i = 0; i < s.assign.rhs.size(); ++i) os << (i ? ", " : "") << rhs_text(s.assign.rhs[i]);
      os << "\n";
      continue;
    }
    os << pad << "if " << print_bool(*s.cond) << ":\n";
    print_block(os, s.then_body, indent + 1);
    if (!s.else_body.empty()) {
      os << pad << "else:\n";
      print_block(os, s.else_body, indent + 1);
    }
    os << pad << "end\n";
  }
}

}  // namespace

std::string print_expr(const Expr& e) {
  switch (e.kind) {
    case Expr::Kind::Number:
      return number_text(e.value);
    case Expr::Kind::Var:
      return e.name;
    case Expr::Kind::Add:
      return wrap(*e.lhs, 1) + " + " + wrap(*e.rhs, 1);
    case Expr::Kind::Sub:
      return wrap(*e.lhs, 1) + " - " + wrap(*e.rhs, 2);
    case Expr::Kind::Mul:
      return wrap(*e.lhs, 2) + "*" + wrap(*e.rhs, 3);
    case Expr::Kind::Div:
      return wrap(*e.lhs, 2) + "/" + wrap(*e.rhs, 3);
    case Expr::Kind::Neg:
      return "-" + wrap(*e.lhs, 3);
    case Expr::Kind::Pow:
      return wrap(*e.lhs, 5) + "**" + std::to_string(e.exponent);
  }
  return "";
}

std::string print_bool(const BoolExpr& b) {
  switch (b.kind) {
    case BoolExpr::Kind::True:
      return "true";
    case BoolExpr::Kind::False:
      return "false";
    case BoolExpr::Kind::Cmp:
      return print_expr(*b.lhs) + " " + op_text(b.op) + " " + print_expr(*b.rhs);
    case BoolExpr::Kind::And:
      return bool_child(*b.left) + " and " + bool_child(*b.right);
    case BoolExpr::Kind::Or:
      return bool_child(*b.left) + " or " + bool_child(*b.right);
    case BoolExpr::Kind::Not:
      return "not " + bool_child(*b.left);
  }
  return "";
}

std::string print_program(const Ast& ast) {
  std::ostringstream os;
  print_block(os, ast.init, 0);
  os << "while " << (ast.guard ? print_bool(*ast.guard) : "true") << ":\n";
  print_block(os, ast.body, 1);
  os << "end\n";
  return os.str();
}

}  // namespace loopm
