#pragma once

#include <set>
#include <string>
#include <vector>

#include "loopm/eigen.hpp"
#include "loopm/solver.hpp"

namespace loopm {

/// E(S_{n+1}) = lambda * E(S_n) + E(inhomogeneous_n), where S is over the
/// defective variables and the inhomogeneous part over the others.
struct CombinationCandidate {
  Poly S;
  BaseValue lambda;
  Poly inhomogeneous;

  /// "E(x + y) satisfies s' = 2*s + 3 - 3*z".
  std::string str() const;
};

struct CombinationSearch {
  std::vector<CombinationCandidate> candidates;
  std::vector<std::string> notes;
};

/// Same classification as check_restrictions.
std::set<std::string> find_defective(const Ast& ast);

/// Linear combinations of defective monomials of degree <= D that satisfy a
/// first-order recurrence. Throws NotUnsolvable for loops without defective
/// variables.
CombinationSearch synthesize_combinations(const Ast& ast, unsigned degree);

/// Deterministic loop over s and the non-defective variables the
/// inhomogeneous part needs, with their updates replaced by expectations.
Ast synth_solvable_loop(const Ast& ast, const CombinationCandidate& cand);

/// Name of the fresh variable synth_solvable_loop introduces.
std::string combination_variable(const Ast& ast);

/// Closed form of E(S_n), solved through the synthesized loop.
ExpPoly solve_combination(const Ast& ast, const CombinationCandidate& cand);

}  // namespace loopm
