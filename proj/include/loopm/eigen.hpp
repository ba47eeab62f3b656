#pragma once

#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "loopm/linalg.hpp"
#include "loopm/ratfunc.hpp"
#include "loopm/surd.hpp"
#include "loopm/upoly.hpp"

namespace loopm {

/// Base of an exponential term: rational, quadratic surd, or a rational
/// function of the parameters. Constructors demote to the simplest kind.
class BaseValue {
 public:
  BaseValue() : v_(Rational(1)) {}
  BaseValue(const Rational& r) : v_(r) {}  // NOLINT(implicit)
  BaseValue(const QuadraticSurd& s);        // NOLINT(implicit)
  BaseValue(const RatFunc& r);              // NOLINT(implicit)

  bool is_rational() const { return std::holds_alternative<Rational>(v_); }
  bool is_surd() const { return std::holds_alternative<QuadraticSurd>(v_); }
  bool is_param() const { return std::holds_alternative<RatFunc>(v_); }
  const Rational& rational() const { return std::get<Rational>(v_); }
  const QuadraticSurd& surd() const { return std::get<QuadraticSurd>(v_); }
  const RatFunc& param() const { return std::get<RatFunc>(v_); }

  bool is_one() const { return is_rational() && rational() == 1; }
  bool is_zero() const { return is_rational() && sgn(rational()) == 0; }
  /// The d of a surd base, 0 otherwise.
  long surd_d() const { return is_surd() ? surd().d : 0; }
  QuadExt as_quad() const;
  RatFunc as_ratfunc() const;  // throws for surds

  /// Magnitude for ordering and limits; NaN for parameter bases.
  double approx_abs() const;
  /// "2", "-1", "1/2", "(1 + sqrt(5))/2", "1 - p".
  std::string str() const;
  /// "2**n", "(-1)**n", "(1/2)**n", "((1 + sqrt(5))/2)**n", "p**n".
  std::string power_str(const std::string& var = "n") const;

  friend bool operator==(const BaseValue& a, const BaseValue& b);
  /// Canonical total order: numeric bases by decreasing magnitude, then
  /// parameter bases, then the base 1.
  friend bool operator<(const BaseValue& a, const BaseValue& b);

 private:
  std::variant<Rational, QuadraticSurd, RatFunc> v_;
};

/// Characteristic polynomial det(zI - A) via Faddeev-LeVerrier.
UPoly<RatFunc> charpoly(const Matrix<RatFunc>& a);

/// Square-free decomposition over Q: pairs (factor, multiplicity).
std::vector<std::pair<UPoly<Rational>, unsigned>> squarefree_decomposition(const UPoly<Rational>& p);

/// Roots with multiplicity. Rational polynomials are factored over Q (linear
/// and quadratic factors, quadratic splitting of higher-degree factors);
/// parametric ones are deflated by the candidate roots `hints`, 0 and +-1.
/// Anything left over raises UnsupportedEigenvalue naming the factor.
std::vector<std::pair<BaseValue, unsigned>> roots_with_multiplicity(const UPoly<RatFunc>& p,
                                                                   const std::vector<RatFunc>& hints = {});

}  // namespace loopm
