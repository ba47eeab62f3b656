#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>

#include "loopm/polynomial.hpp"
#include "loopm/rational.hpp"

namespace loopm {

using Bindings = std::map<std::string, Rational>;

/// Lexicographic comparison with alphabetically earlier variables ranking higher.
bool lex_greater(const Monomial& a, const Monomial& b);

/// Exact quotient a / b in Q[vars], or nullopt when b does not divide a.
std::optional<QPoly> exact_divide(const QPoly& a, const QPoly& b);

/// Greatest common divisor in Q[vars], normalized to lex-leading coefficient 1.
QPoly gcd(const QPoly& a, const QPoly& b);

Rational evaluate(const QPoly& p, const Bindings& bindings);

/// Positive rational c with p = c * q and q an integer polynomial of content 1.
Rational rational_content(const QPoly& p);

/// Element of Q(params): a reduced fraction of parameter polynomials with a
/// lex-monic denominator. Parameter-free values have den() == 1.
class RatFunc {
 public:
  RatFunc() : num_(), den_(Rational(1)) {}
  RatFunc(long c) : RatFunc(Rational(c)) {}  // NOLINT(implicit)
  RatFunc(const Rational& c) : num_(c), den_(Rational(1)) {}  // NOLINT(implicit)
  RatFunc(QPoly num) : num_(std::move(num)), den_(Rational(1)) {}  // NOLINT(implicit)
  RatFunc(QPoly num, QPoly den);

  static RatFunc param(const std::string& name) { return RatFunc(QPoly::var(name)); }

  const QPoly& num() const { return num_; }
  const QPoly& den() const { return den_; }

  bool is_zero() const { return num_.is_zero(); }
  bool is_polynomial() const { return den_.is_constant(); }
  bool is_rational() const { return den_.is_constant() && num_.is_constant(); }
  /// The value when parameter-free.
  std::optional<Rational> as_rational() const;
  std::set<std::string> parameters() const;

  RatFunc operator-() const;
  RatFunc& operator+=(const RatFunc& o);
  RatFunc& operator-=(const RatFunc& o);
  RatFunc& operator*=(const RatFunc& o);
  RatFunc& operator/=(const RatFunc& o);
  friend RatFunc operator+(RatFunc a, const RatFunc& b) { return a += b; }
  friend RatFunc operator-(RatFunc a, const RatFunc& b) { return a -= b; }
  friend RatFunc operator*(RatFunc a, const RatFunc& b) { return a *= b; }
  friend RatFunc operator/(RatFunc a, const RatFunc& b) { return a /= b; }
  friend bool operator==(const RatFunc& a, const RatFunc& b) {
    return a.num_ == b.num_ && a.den_ == b.den_;
  }

  RatFunc pow(long e) const;
  RatFunc inverse() const;
  RatFunc derivative(const std::string& param) const;
  /// Throws UnboundParameter when a parameter lacks a binding, InvalidArgument
  /// when the denominator vanishes.
  Rational evaluate(const Bindings& bindings) const;
  RatFunc substitute(const std::map<std::string, RatFunc>& repl) const;

  std::string str() const;

 private:
  void normalize();
  QPoly num_;
  QPoly den_;
};

inline bool is_zero(const RatFunc& r) { return r.is_zero(); }
inline bool is_one(const RatFunc& r) { return r.is_rational() && r.num().constant_term() == 1; }
CoeffFormat format_coeff(const RatFunc& r);

/// Polynomials over program (or ring) variables with coefficients in Q(params).
using Poly = Polynomial<RatFunc>;

/// Sorted terms of a parameter polynomial, positive terms first.
std::string format_param_poly(const QPoly& p);

/// Replaces every coefficient by its value under the bindings.
QPoly bind_parameters(const Poly& p, const Bindings& bindings);

/// True when no coefficient mentions a parameter.
bool parameter_free(const Poly& p);

std::set<std::string> parameters_of(const Poly& p);

}  // namespace loopm
