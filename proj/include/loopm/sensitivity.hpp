#pragma once

#include <set>
#include <string>

#include "loopm/moments.hpp"
#include "loopm/solver.hpp"

namespace loopm {

struct SensitivityGoal {
  MomentGoal goal;
  std::string param;

  /// "d/dp E(u)".
  std::string str() const { return "d/d" + param + " " + goal.str(); }
};

/// Exact derivative of a closed form.
ExpPoly diff_closed_form(const ExpPoly& cf, const std::string& param);

/// Variables whose updates and initial values never (transitively, including
/// control dependence) read the parameter.
std::set<std::string> param_independent_vars(const Ast& ast, const std::string& param);

/// Closed form of the sensitivity. Differentiates the moment closed form when
/// the goal is solvable, otherwise solves the joint system of moment and
/// sensitivity recurrences with sensitivities of parameter-independent
/// monomials set to zero.
ExpPoly solve_sensitivity(const Ast& ast, const SensitivityGoal& goal);

/// The joint recurrence system used by solve_sensitivity's second path.
RecurrenceSystem sensitivity_system(MomentTransformer& t, const std::vector<Monomial>& monomials,
                                    const std::string& param, bool need_plain);

}  // namespace loopm
