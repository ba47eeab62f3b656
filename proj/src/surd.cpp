#include "loopm/surd.hpp"

#include <cmath>
#include <numeric>

#include "loopm/errors.hpp"

namespace loopm {

std::vector<std::pair<Integer, unsigned>> factor_integer(Integer n) {
  std::vector<std::pair<Integer, unsigned>> out;
  n = abs(n);
  if (n <= 1) return out;
  auto take = [&](const Integer& p) {
    unsigned e = 0;
    while (n % p == 0) {
      n /= p;
      ++e;
    }
    if (e > 0) out.emplace_back(p, e);
  };
  take(2);
  for (Integer p = 3; p * p <= n; p += 2) {
    if (p > 10000000)
      throw AnalysisError(ErrorKind::ResourceLimit, "algebra", "integer too large to factor: " + to_string(n));
    take(p);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

std::vector<Integer> divisors(const Integer& n) {
  std::vector<Integer> out{1};
  for (const auto& [p, e] : factor_integer(n)) {
    std::size_t base = out.size();
    Integer pk = 1;
    for (unsigned k = 1; k <= e; ++k) {
      pk *= p;
      for (std::size_t i = 0; i < base; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Integer squarefree_core(const Integer& n, Integer* root) {
  Integer core = sgn(n) < 0 ? -1 : 1, r = 1;
  for (const auto& [p, e] : factor_integer(n)) {
    for (unsigned k = 0; k < e / 2; ++k) r *= p;
    if (e % 2) core *= p;
  }
  if (root) *root = r;
  return core;
}

std::string surd_symbol(long d) { return "sqrt(" + std::to_string(d) + ")"; }

std::optional<long> parse_surd_symbol(const std::string& name) {
  if (name.size() < 7 || name.compare(0, 5, "sqrt(") != 0 || name.back() != ')') return std::nullopt;
  try {
    return std::stol(name.substr(5, name.size() - 6));
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

Poly reduce_surds(const Poly& p) {
  bool any = false;
  for (const auto& [m, c] : p.terms())
    for (const auto& [v, e] : m.factors())
      if (e > 1 && parse_surd_symbol(v)) any = true;
  if (!any) return p;
  Poly out;
  for (const auto& [m, c] : p.terms()) {
    RatFunc coeff = c;
    std::vector<Monomial::Factor> fs;
    for (const auto& [v, e] : m.factors()) {
      if (auto d = parse_surd_symbol(v); d && e > 1) {
        coeff *= RatFunc(pow(Rational(*d), static_cast<long>(e / 2)));
        if (e % 2) fs.emplace_back(v, 1);
      } else {
        fs.emplace_back(v, e);
      }
    }
    out.add_term(Monomial::from_factors(std::move(fs)), coeff);
  }
  return out;
}

// ---------------------------------------------------------------------------

QuadExt::QuadExt(RatFunc a, RatFunc b, long d) : a_(std::move(a)), b_(std::move(b)), d_(d) {
  if (b_.is_zero()) d_ = 0;
}

long QuadExt::merge_d(const QuadExt& o) const {
  if (b_.is_zero()) return o.d_;
  if (o.b_.is_zero()) return d_;
  if (d_ != o.d_)
    throw AnalysisError(ErrorKind::InvalidArgument, "algebra",
                        "cannot mix sqrt(" + std::to_string(d_) + ") and sqrt(" + std::to_string(o.d_) + ")");
  return d_;
}

QuadExt QuadExt::conjugate() const { return QuadExt(a_, -b_, d_); }

RatFunc QuadExt::norm() const { return a_ * a_ - RatFunc(Rational(d_)) * b_ * b_; }

QuadExt QuadExt::operator-() const { return QuadExt(-a_, -b_, d_); }

QuadExt& QuadExt::operator+=(const QuadExt& o) {
  long d = merge_d(o);
  *this = QuadExt(a_ + o.a_, b_ + o.b_, d);
  return *this;
}

QuadExt& QuadExt::operator-=(const QuadExt& o) { return *this += -o; }

QuadExt& QuadExt::operator*=(const QuadExt& o) {
  long d = merge_d(o);
  if (d == 0) {
    a_ *= o.a_;
    return *this;
  }
  RatFunc na = a_ * o.a_ + RatFunc(Rational(d)) * b_ * o.b_;
  RatFunc nb = a_ * o.b_ + b_ * o.a_;
  *this = QuadExt(na, nb, d);
  return *this;
}

QuadExt& QuadExt::operator/=(const QuadExt& o) {
  if (o.is_zero()) throw AnalysisError(ErrorKind::InvalidArgument, "algebra", "division by zero");
  if (o.b_.is_zero()) {
    RatFunc inv = o.a_.inverse();
    *this = QuadExt(a_ * inv, b_ * inv, d_);
    return *this;
  }
  RatFunc n = o.norm();
  QuadExt num = *this * o.conjugate();
  *this = QuadExt(num.a_ / n, num.b_ / n, num.d_);
  return *this;
}

Poly QuadExt::to_poly() const {
  Poly out(a_);
  if (!b_.is_zero()) out.add_term(Monomial::var(surd_symbol(d_)), b_);
  return out;
}

std::string QuadExt::str() const { return to_poly().str(); }

// ---------------------------------------------------------------------------

double QuadraticSurd::approx_real() const {
  double r = to_double(a);
  if (d > 0) r += to_double(b) * std::sqrt(static_cast<double>(d));
  return r;
}

double QuadraticSurd::approx_abs() const {
  if (d > 0) return std::fabs(approx_real());
  double re = to_double(a), im = to_double(b) * std::sqrt(static_cast<double>(-d));
  return std::hypot(re, im);
}

std::string QuadraticSurd::str() const {
  Integer l;
  mpz_lcm(l.get_mpz_t(), a.get_den_mpz_t(), b.get_den_mpz_t());
  Rational ra = a * l, rb = b * l;
  Integer na = ra.get_num(), nb = rb.get_num();
  std::string root = surd_symbol(d);
  std::string surd_part;
  Integer ab = abs(nb);
  surd_part = ab == 1 ? root : to_string(ab) + "*" + root;
  std::string num;
  if (na == 0)
    num = (sgn(nb) < 0 ? "-" : "") + surd_part;
  else
    num = to_string(na) + (sgn(nb) < 0 ? " - " : " + ") + surd_part;
  if (l == 1) return num;
  if (na == 0) return num + "/" + to_string(l);
  return "(" + num + ")/" + to_string(l);
}

// ---------------------------------------------------------------------------

AlgNumber::AlgNumber(const RatFunc& c) { add(1, c); }

AlgNumber AlgNumber::from_surd(const QuadraticSurd& s) {
  AlgNumber out;
  out.add(1, RatFunc(s.a));
  out.add(s.d, RatFunc(s.b));
  return out;
}

void AlgNumber::add(long k, const RatFunc& c) {
  if (c.is_zero()) return;
  auto [it, inserted] = coeffs_.emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second.is_zero()) coeffs_.erase(it);
  }
}

bool AlgNumber::is_one() const {
  return coeffs_.size() == 1 && coeffs_.begin()->first == 1 && loopm::is_one(coeffs_.begin()->second);
}

AlgNumber AlgNumber::operator*(const AlgNumber& o) const {
  AlgNumber out;
  for (const auto& [j, cj] : coeffs_) {
    for (const auto& [k, ck] : o.coeffs_) {
      long g = std::gcd(j < 0 ? -j : j, k < 0 ? -k : k);
      long core = (j / g) * (k / g);
      Rational factor(g);
      if (j < 0 && k < 0) factor = -factor;
      out.add(core, cj * ck * RatFunc(factor));
    }
  }
  return out;
}

}  // namespace loopm
