#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "loopm/ratfunc.hpp"

namespace loopm {

/// Prime factorization by trial division. Throws ResourceLimit for inputs
/// with a prime factor above 10^7 (never reached by loop-sized constants).
std::vector<std::pair<Integer, unsigned>> factor_integer(Integer n);

/// Positive divisors of |n| (n != 0).
std::vector<Integer> divisors(const Integer& n);

/// n = root^2 * core with core squarefree (sign kept on core).
Integer squarefree_core(const Integer& n, Integer* root = nullptr);

/// Ring symbol standing for sqrt(d) inside polynomials: "sqrt(5)".
std::string surd_symbol(long d);
std::optional<long> parse_surd_symbol(const std::string& name);

/// Rewrites sqrt(d)**k as d**(k/2) * sqrt(d)**(k%2) everywhere.
Poly reduce_surds(const Poly& p);

/// Element a + b*sqrt(d) of Q(params)(sqrt(d)). d == 0 marks the plain field;
/// mixing two different nonzero d throws.
class QuadExt {
 public:
  QuadExt() = default;
  QuadExt(long c) : a_(c) {}               // NOLINT(implicit)
  QuadExt(const Rational& c) : a_(c) {}    // NOLINT(implicit)
  QuadExt(const RatFunc& c) : a_(c) {}     // NOLINT(implicit)
  QuadExt(RatFunc a, RatFunc b, long d);

  const RatFunc& a() const { return a_; }
  const RatFunc& b() const { return b_; }
  long d() const { return d_; }

  bool is_zero() const { return a_.is_zero() && b_.is_zero(); }
  QuadExt conjugate() const;
  /// a^2 - d*b^2.
  RatFunc norm() const;

  QuadExt operator-() const;
  QuadExt& operator+=(const QuadExt& o);
  QuadExt& operator-=(const QuadExt& o);
  QuadExt& operator*=(const QuadExt& o);
  QuadExt& operator/=(const QuadExt& o);
  friend QuadExt operator+(QuadExt x, const QuadExt& y) { return x += y; }
  friend QuadExt operator-(QuadExt x, const QuadExt& y) { return x -= y; }
  friend QuadExt operator*(QuadExt x, const QuadExt& y) { return x *= y; }
  friend QuadExt operator/(QuadExt x, const QuadExt& y) { return x /= y; }
  friend bool operator==(const QuadExt& x, const QuadExt& y) {
    return x.a_ == y.a_ && x.b_ == y.b_ && (x.b_.is_zero() || x.d_ == y.d_);
  }

  /// Polynomial form a + b*sqrt(d) using the ring symbol.
  Poly to_poly() const;
  std::string str() const;

 private:
  long merge_d(const QuadExt& o) const;
  RatFunc a_, b_;
  long d_ = 0;
};

inline bool is_zero(const QuadExt& q) { return q.is_zero(); }

/// Exponential base a + b*sqrt(d): b != 0, d squarefree and not 1.
struct QuadraticSurd {
  Rational a, b;
  long d = 0;

  double approx_real() const;
  /// |a + b sqrt(d)|, also for d < 0.
  double approx_abs() const;
  std::string str() const;
  QuadExt as_quad() const { return QuadExt(RatFunc(a), RatFunc(b), d); }
  friend bool operator==(const QuadraticSurd&, const QuadraticSurd&) = default;
};

/// Exact element of the multi-quadratic extension: sum of c_k * sqrt(k) over
/// squarefree k (k == 1 is the rational part). Products use
/// sqrt(j)*sqrt(k) = -sqrt(jk) when j, k are both negative.
class AlgNumber {
 public:
  AlgNumber() = default;
  explicit AlgNumber(const RatFunc& c);
  static AlgNumber from_surd(const QuadraticSurd& s);

  bool is_one() const;
  bool is_zero() const { return coeffs_.empty(); }
  AlgNumber operator*(const AlgNumber& o) const;
  friend bool operator==(const AlgNumber&, const AlgNumber&) = default;

 private:
  void add(long k, const RatFunc& c);
  std::map<long, RatFunc> coeffs_;
};

}  // namespace loopm
