#pragma once

#include <set>
#include <string>
#include <vector>

#include "loopm/ratfunc.hpp"

namespace loopm {

enum class OrderKind {
  Lex,
  DegRevLex,
  /// Block order: degrevlex on the first `block` variables, ties broken by
  /// degrevlex on the rest. Eliminates the first block.
  Elimination,
};

struct MonomialOrder {
  OrderKind kind = OrderKind::DegRevLex;
  /// Variables from highest to lowest precedence.
  std::vector<std::string> vars;
  std::size_t block = 0;

  static MonomialOrder lex(std::vector<std::string> vars) { return {OrderKind::Lex, std::move(vars), 0}; }
  static MonomialOrder degrevlex(std::vector<std::string> vars) {
    return {OrderKind::DegRevLex, std::move(vars), 0};
  }

  bool greater(const Monomial& a, const Monomial& b) const;
  Monomial leading_monomial(const Poly& p) const;
};

struct Ideal {
  std::vector<Poly> generators;
  MonomialOrder order;
};

/// Reduced Groebner basis: monic, inter-reduced, sorted by decreasing leading
/// monomial. Ring variables must all appear in `order.vars`; parameters live in
/// the coefficients. Throws ResourceLimit past the configured pair budget.
std::vector<Poly> groebner_basis(const std::vector<Poly>& gens, const MonomialOrder& order);

/// Fully reduced normal form of f modulo a Groebner basis.
Poly normal_form(const Poly& f, const std::vector<Poly>& basis, const MonomialOrder& order);

/// ideal intersected with the subring without `kill`; the result carries a
/// reduced lex basis over the surviving variables (in their original order).
Ideal eliminate_vars(const Ideal& ideal, const std::set<std::string>& kill);

/// True when every S-polynomial of the basis reduces to zero.
bool satisfies_buchberger_criterion(const std::vector<Poly>& basis, const MonomialOrder& order);

}  // namespace loopm
