#include "loopm/eigen.hpp"

#include <cctype>
#include <cmath>
#include <limits>
#include <set>

#include "loopm/errors.hpp"

namespace loopm {

BaseValue::BaseValue(const QuadraticSurd& s) {
  if (sgn(s.b) == 0 || s.d == 1)
    v_ = s.a + (s.d == 1 ? s.b : Rational(0));
  else
    v_ = s;
}

BaseValue::BaseValue(const RatFunc& r) {
  if (auto q = r.as_rational())
    v_ = *q;
  else
    v_ = r;
}

QuadExt BaseValue::as_quad() const {
  if (is_rational()) return QuadExt(rational());
  if (is_surd()) return surd().as_quad();
  return QuadExt(param());
}

RatFunc BaseValue::as_ratfunc() const {
  if (is_rational()) return RatFunc(rational());
  if (is_param()) return param();
  throw AnalysisError(ErrorKind::InvalidArgument, "solver", "surd base " + str() + " is not a rational function");
}

double BaseValue::approx_abs() const {
  if (is_rational()) return std::fabs(to_double(rational()));
  if (is_surd()) return surd().approx_abs();
  return std::numeric_limits<double>::quiet_NaN();
}

std::string BaseValue::str() const {
  if (is_rational()) return to_string(rational());
  if (is_surd()) return surd().str();
  std::string s = param().str();
  // RatFunc renders a lone multi-term numerator in parentheses.
  if (s.size() > 2 && s.front() == '(' && s.back() == ')') {
    int depth = 0;
    bool wraps = true;
    for (std::size_t i = 0; i < s.size(); ++i) {
      depth += s[i] == '(' ? 1 : s[i] == ')' ? -1 : 0;
      if (depth == 0 && i + 1 < s.size()) wraps = false;
    }
    if (wraps) s = s.substr(1, s.size() - 2);
  }
  return s;
}

std::string BaseValue::power_str(const std::string& var) const {
  std::string s = str();
  bool atomic = !s.empty() && s.front() != '-';
  for (char ch : s)
    if (!(std::isalnum(static_cast<unsigned char>(ch)) || ch == '_')) atomic = false;
  return (atomic ? s : "(" + s + ")") + "**" + var;
}

bool operator==(const BaseValue& a, const BaseValue& b) {
  if (a.v_.index() != b.v_.index()) return false;
  if (a.is_rational()) return a.rational() == b.rational();
  if (a.is_surd()) return a.surd() == b.surd();
  return a.param() == b.param();
}

namespace {

int rank(const BaseValue& b) {
  if (b.is_one()) return 2;
  return b.is_param() ? 1 : 0;
}

double approx_real(const BaseValue& b) {
  if (b.is_rational()) return to_double(b.rational());
  return b.surd().approx_real();
}

}  // namespace

bool operator<(const BaseValue& a, const BaseValue& b) {
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return ra < rb;
  if (ra == 2) return false;
  if (ra == 1) {
    std::string sa = a.str(), sb = b.str();
    if (sa != sb) return sa < sb;
    return false;
  }
  double ma = a.approx_abs(), mb = b.approx_abs();
  if (ma != mb) return ma > mb;
  double xa = approx_real(a), xb = approx_real(b);
  if (xa != xb) return xa > xb;
  if (a.v_.index() != b.v_.index()) return a.v_.index() < b.v_.index();
  if (a.is_rational()) return a.rational() > b.rational();
  const auto &sa = a.surd(), &sb = b.surd();
  if (sa.d != sb.d) return sa.d < sb.d;
  if (sa.a != sb.a) return sa.a > sb.a;
  return sa.b > sb.b;
}

// ---------------------------------------------------------------------------

UPoly<RatFunc> charpoly(const Matrix<RatFunc>& a) {
  std::size_t n = a.size();
  std::vector<RatFunc> c(n + 1, RatFunc(0));
  c[n] = RatFunc(1);
  if (n == 0) return UPoly<RatFunc>(c);
  if (n == 1) {
    c[0] = -a[0][0];
    return UPoly<RatFunc>(c);
  }
  Matrix<RatFunc> m(n, std::vector<RatFunc>(n, RatFunc(0)));
  for (std::size_t i = 0; i < n; ++i) m[i][i] = RatFunc(1);
  for (std::size_t k = 1; k <= n; ++k) {
    Matrix<RatFunc> am(n, std::vector<RatFunc>(n, RatFunc(0)));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (a[i][l].is_zero()) continue;
        for (std::size_t j = 0; j < n; ++j)
          if (!m[l][j].is_zero()) am[i][j] += a[i][l] * m[l][j];
      }
    RatFunc tr(0);
    for (std::size_t i = 0; i < n; ++i) tr += am[i][i];
    c[n - k] = -tr / RatFunc(static_cast<long>(k));
    for (std::size_t i = 0; i < n; ++i) am[i][i] += c[n - k];
    m = std::move(am);
  }
  return UPoly<RatFunc>(c);
}

std::vector<std::pair<UPoly<Rational>, unsigned>> squarefree_decomposition(const UPoly<Rational>& p) {
  std::vector<std::pair<UPoly<Rational>, unsigned>> out;
  if (p.degree() <= 0) return out;
  UPoly<Rational> f = p.monic();
  UPoly<Rational> fp = f.derivative();
  UPoly<Rational> a0 = gcd(f, fp);
  UPoly<Rational> b = f / a0, c = fp / a0;
  UPoly<Rational> d = c - b.derivative();
  for (unsigned i = 1; b.degree() > 0; ++i) {
    UPoly<Rational> ai = gcd(b, d);
    b = b / ai;
    c = d / ai;
    d = c - b.derivative();
    if (ai.degree() > 0) out.emplace_back(ai, i);
  }
  return out;
}

namespace {

/// Scales to an integer polynomial with content 1 and positive leading term.
std::vector<Integer> primitive_integer(const UPoly<Rational>& p) {
  Integer l = 1, g = 0;
  for (const auto& c : p.coeffs()) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), c.get_den_mpz_t());
  std::vector<Integer> out;
  for (const auto& c : p.coeffs()) {
    Rational s = c * l;
    out.push_back(s.get_num());
    mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), s.get_num_mpz_t());
  }
  if (sgn(out.back()) < 0) g = -g;
  for (auto& c : out) c /= g;
  return out;
}

UPoly<Rational> from_integers(const std::vector<Integer>& c) {
  std::vector<Rational> q;
  for (const auto& x : c) q.emplace_back(x);
  return UPoly<Rational>(q);
}

UPoly<Rational> to_rational(const UPoly<RatFunc>& p) {
  std::vector<Rational> q;
  for (const auto& c : p.coeffs()) q.push_back(*c.as_rational());
  return UPoly<Rational>(q);
}

[[noreturn]] void unsupported(const std::string& factor) {
  throw AnalysisError(ErrorKind::UnsupportedEigenvalue, "solver",
                      "characteristic factor " + factor + " has no linear or quadratic splitting");
}

std::vector<Rational> rational_roots(const UPoly<Rational>& p) {
  std::vector<Integer> c = primitive_integer(p);
  std::vector<Rational> roots;
  if (sgn(c.front()) == 0) roots.emplace_back(0);
  std::size_t low = 0;
  while (low < c.size() && sgn(c[low]) == 0) ++low;
  if (low + 1 >= c.size()) return roots;
  std::set<Rational> seen;
  for (const auto& num : divisors(c[low])) {
    for (const auto& den : divisors(c.back())) {
      for (int s : {1, -1}) {
        Rational r(num * s, den);
        r.canonicalize();
        if (!seen.insert(r).second) continue;
        if (sgn(p.eval(r)) == 0) roots.push_back(r);
      }
    }
  }
  return roots;
}

/// Searches an integer quadratic factor of a primitive integer polynomial by
/// interpolating divisor choices at z = 0, 1, -1.
std::optional<UPoly<Rational>> quadratic_factor(const UPoly<Rational>& p) {
  std::vector<Integer> c = primitive_integer(p);
  UPoly<Rational> f = from_integers(c);
  auto value = [&](long z) { return f.eval(Rational(z)).get_num(); };
  Integer v0 = value(0), v1 = value(1), vm = value(-1);
  if (sgn(v0) == 0 || sgn(v1) == 0 || sgn(vm) == 0) return std::nullopt;
  auto signed_divs = [](const Integer& v) {
    std::vector<Integer> out;
    for (const auto& d : divisors(v)) {
      out.push_back(d);
      out.push_back(-d);
    }
    return out;
  };
  auto d0 = signed_divs(v0), d1 = signed_divs(v1), dm = signed_divs(vm);
  if (d0.size() * d1.size() * dm.size() > 4000000)
    throw AnalysisError(ErrorKind::ResourceLimit, "solver", "quadratic factor search too large for " + p.str());
  for (const auto& g0 : d0)
    for (const auto& g1 : d1)
      for (const auto& gm : dm) {
        Integer s = g1 + gm, t = g1 - gm;
        if (s % 2 != 0 || t % 2 != 0) continue;
        Integer alpha = s / 2 - g0, beta = t / 2;
        if (sgn(alpha) <= 0) continue;
        UPoly<Rational> g = from_integers({g0, beta, alpha});
        if (c.back() % alpha != 0) continue;
        auto [q, r] = f.divmod(g);
        if (r.is_zero()) return g;
      }
  return std::nullopt;
}

void add_root(std::vector<std::pair<BaseValue, unsigned>>& roots, const BaseValue& b, unsigned mult) {
  for (auto& [r, m] : roots)
    if (r == b) {
      m += mult;
      return;
    }
  roots.emplace_back(b, mult);
}

void split_quadratic(const UPoly<Rational>& q, unsigned mult, std::vector<std::pair<BaseValue, unsigned>>& roots) {
  Rational a = q.coeff(2), b = q.coeff(1), c = q.coeff(0);
  Rational disc = b * b - 4 * a * c;
  // disc = (num/den) = num*den / den^2
  Integer nd = disc.get_num() * disc.get_den();
  Integer root;
  Integer core = squarefree_core(nd, &root);
  Rational scale = Rational(root, disc.get_den());
  scale.canonicalize();
  Rational re = -b / (2 * a), im = scale / (2 * a);
  if (core == 1) {
    add_root(roots, BaseValue(re + im), mult);
    add_root(roots, BaseValue(re - im), mult);
    return;
  }
  long d = core.get_si();
  im = abs(im);
  add_root(roots, BaseValue(QuadraticSurd{re, im, d}), mult);
  add_root(roots, BaseValue(QuadraticSurd{re, -im, d}), mult);
}

void factor_rational(UPoly<Rational> f, unsigned mult, std::vector<std::pair<BaseValue, unsigned>>& roots) {
  for (const auto& r : rational_roots(f)) {
    add_root(roots, BaseValue(r), mult);
    f = f / UPoly<Rational>::linear(r);
  }
  while (f.degree() > 0) {
    if (f.degree() == 1) {
      add_root(roots, BaseValue(-f.coeff(0) / f.coeff(1)), mult);
      return;
    }
    if (f.degree() == 2) {
      split_quadratic(f, mult, roots);
      return;
    }
    if (f.degree() == 3) unsupported(f.monic().str());
    auto g = quadratic_factor(f);
    if (!g) unsupported(f.monic().str());
    split_quadratic(*g, mult, roots);
    f = f / *g;
  }
}

}  // namespace

std::vector<std::pair<BaseValue, unsigned>> roots_with_multiplicity(const UPoly<RatFunc>& p,
                                                                   const std::vector<RatFunc>& hints) {
  std::vector<std::pair<BaseValue, unsigned>> roots;
  bool rational = true;
  for (const auto& c : p.coeffs())
    if (!c.is_rational()) rational = false;
  if (rational) {
    for (const auto& [f, m] : squarefree_decomposition(to_rational(p))) factor_rational(f, m, roots);
    return roots;
  }
  UPoly<RatFunc> f = p.monic();
  std::vector<RatFunc> candidates = hints;
  for (long k : {0L, 1L, -1L}) candidates.emplace_back(k);
  for (const auto& cand : candidates) {
    unsigned mult = 0;
    while (f.degree() > 0 && f.eval(cand).is_zero()) {
      f = f / UPoly<RatFunc>::linear(cand);
      ++mult;
    }
    if (mult > 0) add_root(roots, BaseValue(cand), mult);
  }
  if (f.degree() == 1) {
    add_root(roots, BaseValue(-f.coeff(0)), 1);
  } else if (f.degree() > 1) {
    bool rest_rational = true;
    for (const auto& c : f.coeffs())
      if (!c.is_rational()) rest_rational = false;
    if (!rest_rational) unsupported(f.str());
    for (const auto& [g, m] : squarefree_decomposition(to_rational(f))) factor_rational(g, m, roots);
  }
  return roots;
}

}  // namespace loopm
