#pragma once

#include <string>
#include <utility>
#include <vector>

#include "loopm/groebner.hpp"
#include "loopm/hilbert.hpp"
#include "loopm/solver.hpp"

namespace loopm {

/// Prime-balance rows of prod b_i^{v_i} = 1 for rational bases: one row per
/// prime (in increasing order) holding the exponent of that prime in each base.
/// Negative bases add no row here; the sign parity is handled separately.
DioSystem balance_system(const std::vector<Rational>& bases);

/// Generators of the multiplicative relations among b_1^n, ..., b_k^n as
/// binomials in `names`. Complete for rational bases; surd bases use a
/// bounded exponent search (sound, not complete). Parametric bases are
/// treated as independent.
std::vector<Poly> mult_relations(const std::vector<BaseValue>& bases, const std::vector<std::string>& names);

struct InvariantBasis {
  /// Goal symbols from highest to lowest lex precedence.
  std::vector<std::string> symbols;
  /// Reduced lex Groebner basis with parameter denominators cleared.
  std::vector<Poly> generators;
  std::vector<std::string> notes;

  MonomialOrder order() const { return MonomialOrder::lex(symbols); }
  /// "<poly> = 0" per generator.
  std::vector<std::string> lines() const;
};

/// All polynomial relations among the closed forms that hold for every n.
InvariantBasis invariant_basis(const std::vector<std::pair<std::string, ExpPoly>>& forms);

/// True iff the candidate lies in the ideal.
bool membership_check(const Poly& candidate, const InvariantBasis& basis);

/// Scales g so that parameter denominators disappear and the content is 1.
Poly clear_denominators(const Poly& g, const MonomialOrder& order);

/// Substitutes closed forms for the symbols of a polynomial.
ExpPoly substitute_forms(const Poly& g, const std::vector<std::pair<std::string, ExpPoly>>& forms);

/// Shift by k: the sequence n -> f(n + k).
ExpPoly shift(const ExpPoly& f, unsigned k);

}  // namespace loopm
