#pragma once

#include <string>
#include <utility>
#include <vector>

#include "loopm/polynomial.hpp"

namespace loopm {

/// Dense univariate polynomial over a field F; coefficient i multiplies z^i.
template <class F>
class UPoly {
 public:
  UPoly() = default;
  explicit UPoly(std::vector<F> coeffs) : c_(std::move(coeffs)) { trim(); }
  static UPoly constant(const F& c) { return UPoly(std::vector<F>{c}); }
  /// z - root
  static UPoly linear(const F& root) { return UPoly(std::vector<F>{-root, F(1)}); }
  static UPoly monomial(unsigned k) {
    std::vector<F> c(k + 1, F(0));
    c[k] = F(1);
    return UPoly(std::move(c));
  }

  const std::vector<F>& coeffs() const { return c_; }
  bool is_zero() const { return c_.empty(); }
  int degree() const { return static_cast<int>(c_.size()) - 1; }
  F lead() const { return c_.empty() ? F(0) : c_.back(); }
  F coeff(std::size_t i) const { return i < c_.size() ? c_[i] : F(0); }

  F eval(const F& x) const {
    F acc(0);
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) acc = acc * x + *it;
    return acc;
  }

  UPoly monic() const {
    if (c_.empty()) return *this;
    F inv = F(1) / c_.back();
    std::vector<F> c = c_;
    for (auto& x : c) x = x * inv;
    return UPoly(std::move(c));
  }

  UPoly derivative() const {
    std::vector<F> c;
    for (std::size_t i = 1; i < c_.size(); ++i) c.push_back(c_[i] * F(static_cast<long>(i)));
    return UPoly(std::move(c));
  }

  friend UPoly operator+(const UPoly& a, const UPoly& b) {
    std::vector<F> c(std::max(a.c_.size(), b.c_.size()), F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i) c[i] = a.c_[i];
    for (std::size_t i = 0; i < b.c_.size(); ++i) c[i] = c[i] + b.c_[i];
    return UPoly(std::move(c));
  }
  UPoly operator-() const {
    std::vector<F> c = c_;
    for (auto& x : c) x = -x;
    return UPoly(std::move(c));
  }
  friend UPoly operator-(const UPoly& a, const UPoly& b) { return a + (-b); }
  friend UPoly operator*(const UPoly& a, const UPoly& b) {
    if (a.is_zero() || b.is_zero()) return {};
    std::vector<F> c(a.c_.size() + b.c_.size() - 1, F(0));
    for (std::size_t i = 0; i < a.c_.size(); ++i)
      for (std::size_t j = 0; j < b.c_.size(); ++j)
        if (!coeff_is_zero(a.c_[i]) && !coeff_is_zero(b.c_[j])) c[i + j] = c[i + j] + a.c_[i] * b.c_[j];
    return UPoly(std::move(c));
  }
  friend bool operator==(const UPoly& a, const UPoly& b) { return a.c_ == b.c_; }

  /// Quotient and remainder.
  std::pair<UPoly, UPoly> divmod(const UPoly& d) const {
    std::vector<F> r = c_;
    int dd = d.degree();
    if (degree() < dd) return {UPoly(), *this};
    std::vector<F> q(c_.size() - d.c_.size() + 1, F(0));
    F inv = F(1) / d.lead();
    for (int i = degree(); i >= dd; --i) {
      if (coeff_is_zero(r[i])) continue;
      F f = r[i] * inv;
      q[i - dd] = f;
      for (int j = 0; j <= dd; ++j)
        if (!coeff_is_zero(d.c_[j])) r[i - dd + j] = r[i - dd + j] - f * d.c_[j];
    }
    return {UPoly(std::move(q)), UPoly(std::move(r))};
  }
  UPoly operator/(const UPoly& d) const { return divmod(d).first; }
  UPoly operator%(const UPoly& d) const { return divmod(d).second; }

  std::string str(const std::string& var = "z") const {
    Polynomial<F> p;
    for (std::size_t i = 0; i < c_.size(); ++i) p.add_term(Monomial::var(var, static_cast<unsigned>(i)), c_[i]);
    return p.str();
  }

 private:
  void trim() {
    while (!c_.empty() && coeff_is_zero(c_.back())) c_.pop_back();
  }
  std::vector<F> c_;
};

/// Monic gcd via the Euclidean algorithm.
template <class F>
UPoly<F> gcd(UPoly<F> a, UPoly<F> b) {
  while (!b.is_zero()) {
    UPoly<F> r = a % b;
    a = std::move(b);
    b = std::move(r);
  }
  return a.monic();
}

/// (g, s, t) with s*a + t*b = g = gcd(a, b), g monic.
template <class F>
struct ExtendedGcd {
  UPoly<F> g, s, t;
};

template <class F>
ExtendedGcd<F> extended_gcd(const UPoly<F>& a, const UPoly<F>& b) {
  UPoly<F> r0 = a, r1 = b;
  UPoly<F> s0 = UPoly<F>::constant(F(1)), s1, t0, t1 = UPoly<F>::constant(F(1));
  while (!r1.is_zero()) {
    auto [q, r] = r0.divmod(r1);
    r0 = std::move(r1);
    r1 = std::move(r);
    UPoly<F> s2 = s0 - q * s1, t2 = t0 - q * t1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  F inv = F(1) / r0.lead();
  UPoly<F> c = UPoly<F>::constant(inv);
  return {r0 * c, s0 * c, t0 * c};
}

}  // namespace loopm
