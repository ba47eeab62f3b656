#pragma once

#include <functional>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopm/ast.hpp"
#include "loopm/linalg.hpp"
#include "loopm/moments.hpp"

namespace loopm {

using FiniteSupports = std::map<std::string, std::set<Rational>>;

/// Indicator polynomial of a condition over finite-support variables.
/// Throws NotFinite when a variable has no finite support.
Poly iverson_poly(const BoolExpr& cond, const Ast& ast, const FiniteSupports& supports);

/// One component of a recurrence state: E(m), or its derivative with respect
/// to the sensitivity parameter.
struct StateKey {
  Monomial monomial;
  bool derivative = false;

  std::string str() const;
  friend bool operator==(const StateKey&, const StateKey&) = default;
  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

/// x_{n+1} = matrix * x_n with x_0 = initial.
struct RecurrenceSystem {
  std::vector<StateKey> state;
  Matrix<RatFunc> matrix;
  std::vector<RatFunc> initial;

  std::size_t size() const { return state.size(); }
  /// Throws InvalidArgument when the key is not part of the state.
  std::size_t index_of(const StateKey& key) const;
  /// Exact iterates x_0 .. x_steps.
  std::vector<std::vector<RatFunc>> iterate(std::size_t steps) const;
  /// Text matrix: one "E(m)' = ..." row per state component.
  std::string dump() const;
};

/// Expected-value semantics of one loop iteration on polynomials. Works on the
/// normalized program; finite-support variables get power reduction.
class MomentTransformer {
 public:
  explicit MomentTransformer(const Ast& ast);

  const Ast& program() const { return ast_; }
  const FiniteSupports& finite() const { return finite_; }
  const std::set<std::string>& defective() const { return defective_; }

  /// E(m_{n+1}) as a polynomial in the pre-iteration state.
  const Poly& step(const Monomial& m);
  /// E(p) for a polynomial over the state after the body, in terms of the state before.
  Poly step_poly(const Poly& p);
  /// Expected value of p right after the initializations.
  RatFunc initial(const Poly& p) const;
  /// Rewrites powers of finite-support variables below their support size.
  Poly reduce(const Poly& p) const;

 private:
  Poly transform_block(const Block& block, const Poly& p) const;
  Poly transform_assign(const Assignment& a, const Poly& p) const;
  Poly rhs_moment(const Rhs& rhs, unsigned k) const;

  Ast ast_;
  FiniteSupports finite_;
  std::set<std::string> defective_;
  std::map<std::string, std::vector<Poly>> power_tables_;
  mutable std::map<const BoolExpr*, Poly> iverson_cache_;
  std::map<Monomial, Poly> step_cache_;
};

/// Row of a recurrence: coefficients on other state keys.
using RecurrenceRow = std::vector<std::pair<StateKey, RatFunc>>;

/// Worklist closure from the seeds. Throws ResourceLimit past the configured
/// monomial cap.
RecurrenceSystem close_system(const std::vector<StateKey>& seeds,
                              const std::function<RecurrenceRow(const StateKey&)>& row,
                              const std::function<RatFunc(const StateKey&)>& initial);

/// Moment recurrences for the goal monomials. Throws DefectiveDependency when
/// the closure reaches a defective variable (R3).
RecurrenceSystem extract_recurrences(const Ast& ast, const std::vector<Monomial>& goals);
RecurrenceSystem extract_recurrences(MomentTransformer& t, const std::vector<Monomial>& goals);

/// Splits a polynomial into its linear combination of monomials.
RecurrenceRow as_row(const Poly& p, bool derivative = false);

}  // namespace loopm
