#pragma once

#include <string>
#include <vector>

#include "loopm/ast.hpp"

namespace loopm {

/// E(M), cd(M) or kd(M) for a monomial M over program variables.
struct MomentGoal {
  enum class Kind { Raw, Central, Cumulant };
  Kind kind = Kind::Raw;
  unsigned d = 1;
  Monomial monomial;

  /// Accepts "E(x**2)", "E(x*y)", "c2(x)", "k3(x)" and "V(x)" (= c2).
  static MomentGoal parse(const std::string& text);
  static MomentGoal raw(const Monomial& m) { return {Kind::Raw, 1, m}; }
  /// "E(x**2)", "c2(x)", "k3(x)".
  std::string str() const;
  /// The raw moments E(M^j) the goal is built from, j = 1..d (just M for E).
  std::vector<Monomial> raw_monomials() const;

  friend bool operator==(const MomentGoal&, const MomentGoal&) = default;
  friend auto operator<=>(const MomentGoal&, const MomentGoal&) = default;
};

/// Symbol used for E(m) inside invariant polynomials: "E(x**2)".
std::string moment_symbol(const Monomial& m);

/// E(X^k) for a draw with state-free arguments. Throws UnsupportedMoment for
/// TruncNormal and for DiscreteUniform with symbolic bounds.
RatFunc raw_moment(DistKind kind, const std::vector<RatFunc>& args, unsigned k);
RatFunc raw_moment(const Ast& ast, const DistributionDraw& draw, unsigned k);

/// c_d from raw = [1, E(x), ..., E(x^d)].
template <class T>
T central_from_raw(const std::vector<T>& raw) {
  std::size_t d = raw.size() - 1;
  T out = T(0);
  Integer binom = 1;
  for (std::size_t j = 0; j <= d; ++j) {
    if (j > 0) binom = binom * Integer(static_cast<long>(d - j + 1)) / Integer(static_cast<long>(j));
    T mean_pow = T(1);
    for (std::size_t r = 0; r < d - j; ++r) mean_pow = mean_pow * raw[1];
    long sign = (d - j) % 2 == 0 ? 1 : -1;
    out = out + raw[j] * mean_pow * T(RatFunc(Rational(binom) * sign));
  }
  return out;
}

/// kappa_d via kappa_d = m_d - sum_{j<d} C(d-1, j-1) kappa_j m_{d-j}.
template <class T>
T cumulant_from_raw(const std::vector<T>& raw) {
  std::size_t d = raw.size() - 1;
  std::vector<T> kappa(d + 1, T(0));
  for (std::size_t n = 1; n <= d; ++n) {
    T acc = raw[n];
    Integer binom = 1;  // C(n-1, j-1)
    for (std::size_t j = 1; j < n; ++j) {
      if (j > 1) binom = binom * Integer(static_cast<long>(n - j + 1)) / Integer(static_cast<long>(j - 1));
      acc = acc - kappa[j] * raw[n - j] * T(RatFunc(Rational(binom)));
    }
    kappa[n] = acc;
  }
  return kappa[d];
}

/// The goal as a polynomial in the moment symbols of its raw monomials.
Poly goal_polynomial(const MomentGoal& goal);

}  // namespace loopm
