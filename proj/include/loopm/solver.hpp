#pragma once

#include <map>
#include <set>
#include <string>

#include "loopm/eigen.hpp"
#include "loopm/recurrences.hpp"
#include "loopm/surd.hpp"

namespace loopm {

/// The loop counter inside closed-form coefficient polynomials.
inline const std::string kCounter = "n";

/// sum over bases lambda of p_lambda(n) * lambda^n. Coefficient polynomials are
/// in n and surd symbols sqrt(d). `head` lists the values at small n where the
/// sequence differs from the formula (zero eigenvalues).
class ExpPoly {
 public:
  ExpPoly() = default;
  ExpPoly(long c) : ExpPoly(RatFunc(c)) {}  // NOLINT(implicit)
  ExpPoly(const RatFunc& c);                // NOLINT(implicit)
  ExpPoly(const Poly& p);                   // NOLINT(implicit), polynomial in n
  static ExpPoly term(const BaseValue& base, const Poly& coeff);

  const std::map<BaseValue, Poly>& terms() const { return terms_; }
  const std::map<unsigned, QuadExt>& head() const { return head_; }
  void set_value(unsigned n, const QuadExt& v);

  bool is_zero() const { return terms_.empty() && head_.empty(); }
  /// Value at n with parameters left symbolic.
  QuadExt value(unsigned n) const;
  /// Formula value ignoring the head.
  QuadExt formula_value(unsigned n) const;
  std::set<long> surds() const;
  std::set<std::string> parameters() const;

  ExpPoly operator-() const;
  ExpPoly& operator+=(const ExpPoly& o);
  ExpPoly& operator-=(const ExpPoly& o);
  friend ExpPoly operator+(ExpPoly a, const ExpPoly& b) { return a += b; }
  friend ExpPoly operator-(ExpPoly a, const ExpPoly& b) { return a -= b; }
  friend ExpPoly operator*(const ExpPoly& a, const ExpPoly& b);
  ExpPoly scaled(const RatFunc& c) const;
  friend bool operator==(const ExpPoly& a, const ExpPoly& b) {
    return a.terms_ == b.terms_ && a.head_ == b.head_;
  }

  /// "2*n*(1 - p)", "2**n*(x0 + y0 + 2) - (-1)**n/2 - 3/2".
  std::string str() const;

 private:
  void add_term(const BaseValue& base, const Poly& coeff);
  void renormalize_head();
  std::map<BaseValue, Poly> terms_;
  std::map<unsigned, QuadExt> head_;
};

/// Exact closed forms for every state component.
std::map<StateKey, ExpPoly> solve_cfinite(const RecurrenceSystem& system);

/// Closed form of a polynomial over state monomials.
ExpPoly combine(const Poly& p, const std::map<StateKey, ExpPoly>& forms, bool derivative = false);

/// Value at n under the bindings (throws UnboundParameter).
QuadExt evaluate_at(const ExpPoly& cf, unsigned n, const Bindings& bindings);
double to_double(const QuadExt& v);

struct Limit {
  enum class Kind { Value, NoLimit, Diverges };
  Kind kind = Kind::Value;
  RatFunc value;
  std::string str() const;
};

/// Throws ParamCondition when convergence hinges on a parameter base.
Limit limit_at_infinity(const ExpPoly& cf);

/// d/dparam, folding n * lambda' / lambda back into the exponential form.
ExpPoly diff(const ExpPoly& cf, const std::string& param);

}  // namespace loopm
