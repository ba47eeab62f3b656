#pragma once

#include <algorithm>
#include <compare>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "loopm/rational.hpp"

namespace loopm {

/// Power product over named variables. Factors are kept sorted by name with
/// positive exponents, so structural equality is mathematical equality.
class Monomial {
 public:
  using Factor = std::pair<std::string, unsigned>;

  Monomial() = default;
  static Monomial var(const std::string& name, unsigned exponent = 1);
  /// Builds from arbitrary factors (duplicates are merged, zero exponents dropped).
  static Monomial from_factors(std::vector<Factor> factors);

  const std::vector<Factor>& factors() const { return factors_; }
  bool is_one() const { return factors_.empty(); }
  unsigned degree() const;
  unsigned degree(const std::string& name) const;
  bool contains(const std::string& name) const { return degree(name) > 0; }

  Monomial operator*(const Monomial& other) const;
  /// this / other when other divides this.
  std::optional<Monomial> divide(const Monomial& other) const;
  Monomial lcm(const Monomial& other) const;
  /// Drops the given variable entirely.
  Monomial without(const std::string& name) const;

  /// "x**2*y", "1" for the unit monomial.
  std::string str() const;

  auto operator<=>(const Monomial&) const = default;
  bool operator==(const Monomial&) const = default;

 private:
  std::vector<Factor> factors_;
};

/// Graded order used for display: higher total degree first, ties broken by
/// the exponent of the alphabetically first variable where they differ.
bool display_greater(const Monomial& a, const Monomial& b);

inline bool is_zero(const Rational& q) { return sgn(q) == 0; }
inline bool is_one(const Rational& q) { return q == 1; }

/// Unqualified dispatch so that coefficient types found by ADL participate.
template <class C>
bool coeff_is_zero(const C& c) {
  return is_zero(c);
}

/// How a coefficient is rendered next to a monomial:
///   [sign] [prefix*] monomial [*suffix] [/denominator]
struct CoeffFormat {
  bool negative = false;
  Rational content = 1;     // positive
  std::string suffix;       // primitive numerator, "" when 1
  std::string denominator;  // "" when 1
};

/// Renders `coefficient * monomial` without the leading sign.
std::string render_term(const CoeffFormat& f, const Monomial& m);

CoeffFormat format_coeff(const Rational& q);

/// Sparse multivariate polynomial over a coefficient field C. No zero
/// coefficients are stored.
template <class C>
class Polynomial {
 public:
  using Terms = std::map<Monomial, C>;

  Polynomial() = default;
  Polynomial(const C& constant) { add_term(Monomial{}, constant); }  // NOLINT(implicit)
  Polynomial(long constant) : Polynomial(C(constant)) {}              // NOLINT(implicit)
  static Polynomial var(const std::string& name, unsigned exponent = 1) {
    Polynomial p;
    p.terms_.emplace(Monomial::var(name, exponent), C(1));
    return p;
  }
  static Polynomial term(const Monomial& m, const C& c) {
    Polynomial p;
    p.add_term(m, c);
    return p;
  }

  const Terms& terms() const { return terms_; }
  std::size_t size() const { return terms_.size(); }
  bool is_zero() const { return terms_.empty(); }
  bool is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
  }
  C constant_term() const { return coefficient(Monomial{}); }
  C coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? C(0) : it->second;
  }

  void add_term(const Monomial& m, const C& c) {
    if (coeff_is_zero(c)) return;
    auto [it, inserted] = terms_.emplace(m, c);
    if (!inserted) {
      it->second += c;
      if (coeff_is_zero(it->second)) terms_.erase(it);
    }
  }

  unsigned degree() const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree());
    return d;
  }
  unsigned degree(const std::string& name) const {
    unsigned d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.degree(name));
    return d;
  }
  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& [m, c] : terms_)
      for (const auto& [v, e] : m.factors()) out.insert(v);
    return out;
  }
  bool contains(const std::string& name) const {
    for (const auto& [m, c] : terms_)
      if (m.contains(name)) return true;
    return false;
  }

  Polynomial operator-() const {
    Polynomial out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
  }
  Polynomial& operator+=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& o) {
    for (const auto& [m, c] : o.terms_) add_term(m, -c);
    return *this;
  }
  Polynomial& operator*=(const Polynomial& o) { return *this = *this * o; }
  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    Polynomial out;
    for (const auto& [ma, ca] : a.terms_)
      for (const auto& [mb, cb] : b.terms_) out.add_term(ma * mb, ca * cb);
    return out;
  }
  friend bool operator==(const Polynomial& a, const Polynomial& b) { return a.terms_ == b.terms_; }

  Polynomial scaled(const C& c) const {
    if (coeff_is_zero(c)) return {};
    Polynomial out;
    for (const auto& [m, k] : terms_) out.terms_.emplace(m, k * c);
    return out;
  }
  Polynomial times(const Monomial& mono) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m * mono, c);
    return out;
  }

  Polynomial pow(unsigned e) const {
    Polynomial result(C(1)), base = *this;
    while (e > 0) {
      if (e & 1U) result *= base;
      e >>= 1U;
      if (e > 0) base *= base;
    }
    return result;
  }

  /// Coefficients with respect to one variable: this = sum_k out[k] * name^k.
  std::map<unsigned, Polynomial> collect(const std::string& name) const {
    std::map<unsigned, Polynomial> out;
    for (const auto& [m, c] : terms_) out[m.degree(name)].add_term(m.without(name), c);
    return out;
  }

  /// Simultaneous substitution of variables by polynomials.
  Polynomial substitute(const std::map<std::string, Polynomial>& repl) const {
    if (repl.empty()) return *this;
    std::map<std::pair<std::string, unsigned>, Polynomial> power_cache;
    auto power = [&](const std::string& v, unsigned e) -> const Polynomial& {
      auto key = std::make_pair(v, e);
      auto it = power_cache.find(key);
      if (it != power_cache.end()) return it->second;
      return power_cache.emplace(key, repl.at(v).pow(e)).first->second;
    };
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      std::vector<std::pair<std::string, unsigned>> hits;
      std::vector<Monomial::Factor> kept;
      for (const auto& f : m.factors()) {
        if (repl.count(f.first))
          hits.push_back(f);
        else
          kept.push_back(f);
      }
      if (hits.empty()) {
        out.add_term(m, c);
        continue;
      }
      Polynomial term = Polynomial::term(Monomial::from_factors(std::move(kept)), c);
      for (const auto& [v, e] : hits) term = term * power(v, e);
      out += term;
    }
    return out;
  }
  Polynomial substitute(const std::string& name, const Polynomial& value) const {
    return substitute(std::map<std::string, Polynomial>{{name, value}});
  }

  Polynomial derivative(const std::string& name) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
      unsigned e = m.degree(name);
      if (e == 0) continue;
      std::vector<Monomial::Factor> fs = m.factors();
      for (auto& f : fs)
        if (f.first == name) f.second -= 1;
      out.add_term(Monomial::from_factors(std::move(fs)), c * C(static_cast<long>(e)));
    }
    return out;
  }

  template <class D, class F>
  Polynomial<D> map_coefficients(F&& f) const {
    Polynomial<D> out;
    for (const auto& [m, c] : terms_) out.add_term(m, f(c));
    return out;
  }

  /// Monomials sorted by a "greater" relation (display order by default).
  std::vector<Monomial> sorted_monomials(
      const std::function<bool(const Monomial&, const Monomial&)>& greater = display_greater) const {
    std::vector<Monomial> ms;
    ms.reserve(terms_.size());
    for (const auto& [m, c] : terms_) ms.push_back(m);
    std::stable_sort(ms.begin(), ms.end(), greater);
    return ms;
  }

  std::string str(const std::function<bool(const Monomial&, const Monomial&)>& greater = display_greater) const {
    if (terms_.empty()) return "0";
    std::string out;
    bool first = true;
    for (const auto& m : sorted_monomials(greater)) {
      CoeffFormat f = format_coeff(terms_.at(m));
      std::string body = render_term(f, m);
      if (first)
        out += f.negative ? "-" + body : body;
      else
        out += (f.negative ? " - " : " + ") + body;
      first = false;
    }
    return out;
  }

 private:
  Terms terms_;
};

using QPoly = Polynomial<Rational>;

}  // namespace loopm
