#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "loopm/ast.hpp"

namespace loopm {

/// Parses a loop program. Identifiers that are never assigned are symbolic
/// parameters. Implicit trailing probabilities are made explicit.
/// Throws SyntaxError (with line/column) and ProbabilityError.
Ast parse(std::string_view source);

std::string print_expr(const Expr& e);
std::string print_bool(const BoolExpr& b);
/// Pretty-prints in the input syntax; the output reparses to an equal Ast.
std::string print_program(const Ast& ast);

/// Finite value set per variable, nullopt when unbounded.
using SupportMap = std::map<std::string, std::optional<std::set<Rational>>>;

SupportMap analyze_supports(const Ast& ast);

struct VarClassification {
  std::map<std::string, std::set<Rational>> finite;
  std::set<std::string> effective;
  std::set<std::string> defective;
  /// Human-readable restriction violations (R2 conditions over unbounded
  /// variables); empty when the loop satisfies R1-R3 apart from defects.
  std::vector<std::string> violations;
};

VarClassification check_restrictions(const Ast& ast);

/// Variables on, or depending on, a dependency cycle with a non-linear edge.
std::set<std::string> defective_variables(const Ast& ast, const SupportMap& supports);

/// Guard folded into the body and location parameters split off draws.
/// Throws NormalizeError for state-dependent non-location parameters.
Ast normalize(const Ast& ast);

}  // namespace loopm
