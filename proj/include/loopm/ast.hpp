#pragma once

#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "loopm/ratfunc.hpp"

namespace loopm {

struct Expr;
using ExprPtr = std::shared_ptr<const Expr>;

/// Arithmetic expression as written. Converted to Poly once parameters are known.
struct Expr {
  enum class Kind { Number, Var, Add, Sub, Mul, Div, Neg, Pow };
  Kind kind = Kind::Number;
  Rational value;        // Number
  std::string name;      // Var
  ExprPtr lhs, rhs;      // binary operands; Neg and Pow use lhs
  unsigned exponent = 0; // Pow

  static ExprPtr number(const Rational& v);
  static ExprPtr var(const std::string& name);
  static ExprPtr binary(Kind kind, ExprPtr a, ExprPtr b);
  static ExprPtr neg(ExprPtr a);
  static ExprPtr power(ExprPtr base, unsigned exponent);
  /// Expression tree for a polynomial (fractions become divisions).
  static ExprPtr from_poly(const Poly& p);
  static ExprPtr from_ratfunc(const RatFunc& r);

  void collect_vars(std::set<std::string>& out) const;
};

bool operator==(const Expr& a, const Expr& b);
bool same_expr(const ExprPtr& a, const ExprPtr& b);

struct BoolExpr;
using BoolPtr = std::shared_ptr<const BoolExpr>;

struct BoolExpr {
  enum class Kind { True, False, Cmp, And, Or, Not };
  enum class Op { Eq, Ne, Lt, Le, Gt, Ge };
  Kind kind = Kind::True;
  Op op = Op::Eq;
  ExprPtr lhs, rhs;     // Cmp
  BoolPtr left, right;  // And/Or; Not uses left

  void collect_vars(std::set<std::string>& out) const;
};

bool operator==(const BoolExpr& a, const BoolExpr& b);
bool same_bool(const BoolPtr& a, const BoolPtr& b);

enum class DistKind { Bernoulli, Beta, Categorical, DiscreteUniform, Exponential, Gamma, Laplace, Normal, TruncNormal, Uniform };

std::string to_string(DistKind kind);
std::optional<DistKind> parse_dist_kind(const std::string& name);

/// Draw from a distribution. After normalization, `shift` holds the
/// state-dependent location part and `args` are state-free.
struct DistributionDraw {
  DistKind kind = DistKind::Normal;
  std::vector<ExprPtr> args;
  ExprPtr shift;
};

bool operator==(const DistributionDraw& a, const DistributionDraw& b);

struct Branch {
  ExprPtr value;
  RatFunc prob;
};

/// Right-hand side for one target: a probabilistic choice or a draw.
struct Rhs {
  std::vector<Branch> choices;
  std::optional<DistributionDraw> draw;

  bool is_draw() const { return draw.has_value(); }
  bool is_deterministic() const { return !draw && choices.size() == 1; }
};

bool operator==(const Rhs& a, const Rhs& b);

struct Assignment {
  std::vector<std::string> targets;
  std::vector<Rhs> rhs;
};

struct Statement;
using Block = std::vector<Statement>;

struct Statement {
  enum class Kind { Assign, If };
  Kind kind = Kind::Assign;
  Assignment assign;
  BoolPtr cond;
  Block then_body, else_body;
  int line = 0;

  static Statement assignment(Assignment a, int line = 0);
  static Statement if_stmt(BoolPtr cond, Block then_body, Block else_body, int line = 0);
};

bool operator==(const Statement& a, const Statement& b);

/// A single loop: initializations, guard (nullptr means nondeterministic
/// forever), and body.
struct Ast {
  Block init;
  BoolPtr guard;
  Block body;
  std::set<std::string> params;
  /// Program variables in order of first assignment.
  std::vector<std::string> variables;

  bool has_guard() const { return guard != nullptr; }
  bool is_param(const std::string& name) const { return params.count(name) > 0; }

  /// Converts with the program's parameter set; throws SyntaxError for
  /// non-polynomial forms such as division by a program variable.
  Poly poly(const Expr& e) const;
  /// Like poly() but the value must not mention program variables.
  RatFunc constant(const Expr& e, const std::string& what) const;
};

bool operator==(const Ast& a, const Ast& b);

/// Number of arguments each distribution takes (Categorical: at least 1).
std::size_t dist_arity(DistKind kind);

/// Walks all statements (including nested ones) in program order.
template <class F>
void for_each_statement(const Block& block, F&& f) {
  for (const auto& s : block) {
    f(s);
    if (s.kind == Statement::Kind::If) {
      for_each_statement(s.then_body, f);
      for_each_statement(s.else_body, f);
    }
  }
}

}  // namespace loopm
