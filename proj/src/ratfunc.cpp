#include "loopm/ratfunc.hpp"

#include <algorithm>

#include "loopm/errors.hpp"

namespace loopm {

bool lex_greater(const Monomial& a, const Monomial& b) {
  auto ia = a.factors().begin(), ib = b.factors().begin();
  while (ia != a.factors().end() && ib != b.factors().end()) {
    if (ia->first != ib->first) return ia->first < ib->first;
    if (ia->second != ib->second) return ia->second > ib->second;
    ++ia;
    ++ib;
  }
  return ia != a.factors().end();
}

namespace {

const std::pair<const Monomial, Rational>& lex_leading(const QPoly& p) {
  auto best = p.terms().begin();
  for (auto it = p.terms().begin(); it != p.terms().end(); ++it)
    if (lex_greater(it->first, best->first)) best = it;
  return *best;
}

QPoly make_monic(const QPoly& p) {
  if (p.is_zero()) return p;
  return p.scaled(1 / lex_leading(p).second);
}

QPoly content_in(const QPoly& p, const std::string& v) {
  QPoly g;
  for (const auto& [k, coeff] : p.collect(v)) {
    g = gcd(g, coeff);
    if (g.is_constant() && !g.is_zero()) return QPoly(Rational(1));
  }
  return g;
}

QPoly primitive_in(const QPoly& p, const std::string& v) {
  if (p.is_zero()) return p;
  QPoly c = content_in(p, v);
  return *exact_divide(p, c);
}

QPoly pseudo_remainder(QPoly r, const QPoly& b, const std::string& v) {
  unsigned db = b.degree(v);
  QPoly lc_b = b.collect(v).rbegin()->second;
  while (!r.is_zero() && r.degree(v) >= db) {
    unsigned dr = r.degree(v);
    QPoly lc_r = r.collect(v).rbegin()->second;
    r = r * lc_b - (lc_r * b).times(Monomial::var(v, dr - db));
  }
  return r;
}

}  // namespace

std::optional<QPoly> exact_divide(const QPoly& a, const QPoly& b) {
  if (b.is_zero()) throw AnalysisError(ErrorKind::InvalidArgument, "algebra", "division by zero polynomial");
  if (b.is_constant()) return a.scaled(1 / b.constant_term());
  const auto& [lm_b, lc_b] = lex_leading(b);
  QPoly q, r = a;
  while (!r.is_zero()) {
    const auto& [lm_r, lc_r] = lex_leading(r);
    auto t = lm_r.divide(lm_b);
    if (!t) return std::nullopt;
    Rational c = lc_r / lc_b;
    q.add_term(*t, c);
    r -= b.times(*t).scaled(c);
  }
  return q;
}

QPoly gcd(const QPoly& a, const QPoly& b) {
  if (a.is_zero()) return make_monic(b);
  if (b.is_zero()) return make_monic(a);
  if (a.is_constant() || b.is_constant()) return QPoly(Rational(1));
  if (a == b) return make_monic(a);
  std::set<std::string> vars = a.variables();
  for (const auto& v : b.variables()) vars.insert(v);
  const std::string& v = *vars.begin();
  if (!a.contains(v)) return gcd(a, content_in(b, v));
  if (!b.contains(v)) return gcd(content_in(a, v), b);
  // Cheap exact-division shortcut before running the PRS.
  if (auto q = exact_divide(a, b)) return make_monic(b);
  if (auto q = exact_divide(b, a)) return make_monic(a);

  QPoly ca = content_in(a, v), cb = content_in(b, v);
  QPoly g = gcd(ca, cb);
  QPoly r0 = *exact_divide(a, ca), r1 = *exact_divide(b, cb);
  if (r0.degree(v) < r1.degree(v)) std::swap(r0, r1);
  while (!r1.is_zero()) {
    QPoly r = pseudo_remainder(r0, r1, v);
    r0 = std::move(r1);
    r1 = primitive_in(r, v);
    if (r1.degree(v) == 0 && !r1.is_zero()) {
      r0 = QPoly(Rational(1));
      break;
    }
  }
  return make_monic(g * primitive_in(r0, v));
}

Rational evaluate(const QPoly& p, const Bindings& bindings) {
  Rational total = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = c;
    for (const auto& [v, e] : m.factors()) {
      auto it = bindings.find(v);
      if (it == bindings.end())
        throw AnalysisError(ErrorKind::UnboundParameter, "algebra", "parameter '" + v + "' is not bound");
      t *= pow(it->second, static_cast<long>(e));
    }
    total += t;
  }
  return total;
}

Rational rational_content(const QPoly& p) {
  if (p.is_zero()) return 1;
  Integer g = 0, l = 1;
  for (const auto& [m, c] : p.terms()) {
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), c.get_num_mpz_t());
    mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  }
  Rational out(g, l);
  out.canonicalize();
  return out;
}

// ---------------------------------------------------------------------------

RatFunc::RatFunc(QPoly num, QPoly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) throw AnalysisError(ErrorKind::InvalidArgument, "algebra", "rational function with zero denominator");
  normalize();
}

void RatFunc::normalize() {
  if (num_.is_zero()) {
    den_ = QPoly(Rational(1));
    return;
  }
  if (den_.is_constant()) {
    Rational d = den_.constant_term();
    if (d != 1) {
      num_ = num_.scaled(1 / d);
      den_ = QPoly(Rational(1));
    }
    return;
  }
  QPoly g = gcd(num_, den_);
  if (!g.is_constant()) {
    num_ = *exact_divide(num_, g);
    den_ = *exact_divide(den_, g);
  }
  Rational lc = lex_leading(den_).second;
  if (lc != 1) {
    num_ = num_.scaled(1 / lc);
    den_ = den_.scaled(1 / lc);
  }
  if (den_.is_constant()) {
    num_ = num_.scaled(1 / den_.constant_term());
    den_ = QPoly(Rational(1));
  }
}

std::optional<Rational> RatFunc::as_rational() const {
  if (!is_rational()) return std::nullopt;
  return num_.constant_term();
}

std::set<std::string> RatFunc::parameters() const {
  auto out = num_.variables();
  for (const auto& v : den_.variables()) out.insert(v);
  return out;
}

RatFunc RatFunc::operator-() const {
  RatFunc out = *this;
  out.num_ = -num_;
  return out;
}

RatFunc& RatFunc::operator+=(const RatFunc& o) {
  if (o.is_zero()) return *this;
  if (is_zero()) return *this = o;
  if (den_ == o.den_) {
    num_ += o.num_;
    if (!den_.is_constant()) normalize();
    if (num_.is_zero()) den_ = QPoly(Rational(1));
    return *this;
  }
  num_ = num_ * o.den_ + o.num_ * den_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RatFunc& RatFunc::operator-=(const RatFunc& o) { return *this += -o; }

RatFunc& RatFunc::operator*=(const RatFunc& o) {
  if (is_zero() || o.is_zero()) return *this = RatFunc();
  if (den_.is_constant() && o.den_.is_constant()) {
    num_ = num_ * o.num_;
    return *this;
  }
  num_ = num_ * o.num_;
  den_ = den_ * o.den_;
  normalize();
  return *this;
}

RatFunc RatFunc::inverse() const {
  if (is_zero()) throw AnalysisError(ErrorKind::InvalidArgument, "algebra", "inverse of zero");
  return RatFunc(den_, num_);
}

RatFunc& RatFunc::operator/=(const RatFunc& o) { return *this *= o.inverse(); }

RatFunc RatFunc::pow(long e) const {
  if (e < 0) return inverse().pow(-e);
  RatFunc out(QPoly(num_.pow(static_cast<unsigned>(e))));
  if (!den_.is_constant()) out = RatFunc(num_.pow(static_cast<unsigned>(e)), den_.pow(static_cast<unsigned>(e)));
  return out;
}

RatFunc RatFunc::derivative(const std::string& param) const {
  if (den_.is_constant()) return RatFunc(num_.derivative(param));
  QPoly n = num_.derivative(param) * den_ - num_ * den_.derivative(param);
  return RatFunc(n, den_ * den_);
}

Rational RatFunc::evaluate(const Bindings& bindings) const {
  Rational d = loopm::evaluate(den_, bindings);
  if (sgn(d) == 0)
    throw AnalysisError(ErrorKind::InvalidArgument, "algebra", "denominator " + den_.str() + " vanishes at the bindings");
  return loopm::evaluate(num_, bindings) / d;
}

RatFunc RatFunc::substitute(const std::map<std::string, RatFunc>& repl) const {
  auto sub = [&](const QPoly& p) {
    RatFunc out;
    for (const auto& [m, c] : p.terms()) {
      RatFunc t(c);
      for (const auto& [v, e] : m.factors()) {
        auto it = repl.find(v);
        t *= (it == repl.end() ? RatFunc::param(v) : it->second).pow(e);
      }
      out += t;
    }
    return out;
  };
  return sub(num_) / sub(den_);
}

std::string format_param_poly(const QPoly& p) {
  if (p.is_zero()) return "0";
  auto ms = p.sorted_monomials();
  std::stable_partition(ms.begin(), ms.end(), [&](const Monomial& m) { return sgn(p.coefficient(m)) > 0; });
  std::string out;
  bool first = true;
  for (const auto& m : ms) {
    CoeffFormat f = format_coeff(p.coefficient(m));
    std::string body = render_term(f, m);
    if (first)
      out += f.negative ? "-" + body : body;
    else
      out += (f.negative ? " - " : " + ") + body;
    first = false;
  }
  return out;
}

namespace {

bool is_bare_product(const QPoly& p) {
  return p.size() == 1 && p.terms().begin()->second == 1;
}

}  // namespace

CoeffFormat format_coeff(const RatFunc& r) {
  if (r.is_rational()) return format_coeff(r.num().constant_term());
  QPoly num = r.num(), den = r.den();
  Rational cn = rational_content(num), cd = rational_content(den);
  num = num.scaled(1 / cn);
  den = den.scaled(1 / cd);
  CoeffFormat f;
  f.content = cn / cd;
  if (den.is_constant() && den.constant_term() < 0) {
    den = -den;
    num = -num;
  }
  if (num.size() == 1 && sgn(num.terms().begin()->second) < 0) {
    f.negative = true;
    num = -num;
  }
  if (num.is_constant()) {
    if (num.constant_term() < 0) {
      f.negative = !f.negative;
      num = -num;
    }
  } else if (num.size() == 1) {
    f.suffix = num.terms().begin()->first.str();
  } else {
    f.suffix = "(" + format_param_poly(num) + ")";
  }
  if (!den.is_constant()) {
    if (den.size() == 1 && is_bare_product(den) && den.terms().begin()->first.factors().size() == 1)
      f.denominator = den.terms().begin()->first.str();
    else if (den.size() == 1 && is_bare_product(den))
      f.denominator = "(" + den.terms().begin()->first.str() + ")";
    else
      f.denominator = "(" + format_param_poly(den) + ")";
  }
  return f;
}

std::string RatFunc::str() const {
  if (is_zero()) return "0";
  CoeffFormat f = format_coeff(*this);
  std::string body = render_term(f, Monomial{});
  return f.negative ? "-" + body : body;
}

QPoly bind_parameters(const Poly& p, const Bindings& bindings) {
  QPoly out;
  for (const auto& [m, c] : p.terms()) out.add_term(m, c.evaluate(bindings));
  return out;
}

bool parameter_free(const Poly& p) {
  for (const auto& [m, c] : p.terms())
    if (!c.is_rational()) return false;
  return true;
}

std::set<std::string> parameters_of(const Poly& p) {
  std::set<std::string> out;
  for (const auto& [m, c] : p.terms())
    for (const auto& v : c.parameters()) out.insert(v);
  return out;
}

}  // namespace loopm
