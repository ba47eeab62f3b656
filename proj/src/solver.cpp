#include "loopm/solver.hpp"

#include <climits>
#include <cmath>
#include <functional>
#include <utility>

#include "loopm/errors.hpp"

namespace loopm {

namespace {

QuadExt qpow(QuadExt base, unsigned e) {
  QuadExt out(1);
  while (e > 0) {
    if (e & 1U) out *= base;
    e >>= 1U;
    if (e > 0) base *= base;
  }
  return out;
}

/// p(n) with surd symbols read as square roots.
QuadExt eval_coeff(const Poly& p, unsigned n) {
  QuadExt out;
  for (const auto& [m, c] : p.terms()) {
    QuadExt t(c);
    for (const auto& [v, e] : m.factors()) {
      if (v == kCounter) {
        t *= QuadExt(pow(Rational(n), e));
      } else if (auto d = parse_surd_symbol(v)) {
        QuadExt s(RatFunc(0), RatFunc(1), *d);
        t *= qpow(s, e);
      } else {
        throw AnalysisError(ErrorKind::InvalidArgument, "solver", "unexpected symbol '" + v + "' in closed form");
      }
    }
    out += t;
  }
  return out;
}

BaseValue to_base(const QuadExt& q) {
  if (q.b().is_zero()) return BaseValue(q.a());
  auto a = q.a().as_rational(), b = q.b().as_rational();
  if (!a || !b)
    throw AnalysisError(ErrorKind::UnsupportedEigenvalue, "solver", "parametric quadratic base " + q.str());
  return BaseValue(QuadraticSurd{*a, *b, q.d()});
}

BaseValue base_product(const BaseValue& a, const BaseValue& b) {
  if (a.is_one()) return b;
  if (b.is_one()) return a;
  if (!a.is_surd() && !b.is_surd()) return BaseValue(a.as_ratfunc() * b.as_ratfunc());
  if (a.is_param() || b.is_param())
    throw AnalysisError(ErrorKind::UnsupportedEigenvalue, "solver",
                        "product of a parametric and a surd base: " + a.str() + " * " + b.str());
  return to_base(a.as_quad() * b.as_quad());
}

/// (negative, body) for coefficient * text.
std::pair<bool, std::string> term_text(const RatFunc& c, const std::string& text) {
  CoeffFormat f = format_coeff(c);
  std::vector<std::string> parts;
  Integer a = f.content.get_num(), b = f.content.get_den();
  if (a != 1) parts.push_back(to_string(a));
  if (!text.empty()) parts.push_back(text);
  if (!f.suffix.empty()) parts.push_back(f.suffix);
  if (parts.empty()) parts.push_back("1");
  std::string body;
  for (const auto& p : parts) body += (body.empty() ? "" : "*") + p;
  std::string den;
  if (b != 1 && !f.denominator.empty())
    den = "(" + to_string(b) + "*" + f.denominator + ")";
  else if (b != 1)
    den = to_string(b);
  else
    den = f.denominator;
  if (!den.empty()) body += "/" + den;
  return {f.negative, body};
}

/// Render order: growing or oscillating bases, the polynomial part, decaying
/// bases, then parametric ones.
int render_rank(const BaseValue& b) {
  if (b.is_one()) return 1;
  if (b.is_param()) return 3;
  return b.approx_abs() >= 1 ? 0 : 2;
}

}  // namespace

ExpPoly::ExpPoly(const RatFunc& c) {
  if (!c.is_zero()) terms_.emplace(BaseValue(), Poly(c));
}

ExpPoly::ExpPoly(const Poly& p) {
  if (!p.is_zero()) add_term(BaseValue(), p);
}

ExpPoly ExpPoly::term(const BaseValue& base, const Poly& coeff) {
  ExpPoly out;
  out.add_term(base, coeff);
  return out;
}

void ExpPoly::add_term(const BaseValue& base, const Poly& coeff) {
  if (base.is_zero()) return;
  Poly c = reduce_surds(coeff);
  if (c.is_zero()) return;
  auto [it, inserted] = terms_.emplace(base, c);
  if (!inserted) {
    it->second = reduce_surds(it->second + c);
    if (it->second.is_zero()) terms_.erase(it);
  }
}

QuadExt ExpPoly::formula_value(unsigned n) const {
  QuadExt out;
  for (const auto& [base, p] : terms_) out += eval_coeff(p, n) * qpow(base.as_quad(), n);
  return out;
}

QuadExt ExpPoly::value(unsigned n) const {
  auto it = head_.find(n);
  return it != head_.end() ? it->second : formula_value(n);
}

void ExpPoly::set_value(unsigned n, const QuadExt& v) {
  if (v == formula_value(n))
    head_.erase(n);
  else
    head_[n] = v;
}

void ExpPoly::renormalize_head() {
  std::map<unsigned, QuadExt> old;
  old.swap(head_);
  for (const auto& [n, v] : old) set_value(n, v);
}

std::set<long> ExpPoly::surds() const {
  std::set<long> out;
  for (const auto& [base, p] : terms_) {
    if (base.is_surd()) out.insert(base.surd_d());
    for (const auto& v : p.variables())
      if (auto d = parse_surd_symbol(v)) out.insert(*d);
  }
  return out;
}

std::set<std::string> ExpPoly::parameters() const {
  std::set<std::string> out;
  for (const auto& [base, p] : terms_) {
    if (base.is_param()) {
      auto ps = base.param().parameters();
      out.insert(ps.begin(), ps.end());
    }
    auto ps = parameters_of(p);
    out.insert(ps.begin(), ps.end());
  }
  return out;
}

ExpPoly ExpPoly::operator-() const {
  ExpPoly out;
  for (const auto& [b, p] : terms_) out.terms_.emplace(b, -p);
  for (const auto& [n, v] : head_) out.head_.emplace(n, -v);
  return out;
}

ExpPoly& ExpPoly::operator+=(const ExpPoly& o) {
  std::map<unsigned, QuadExt> vals;
  for (const auto* src : {&std::as_const(head_), &o.head_})
    for (const auto& [n, v] : *src) vals[n] = value(n) + o.value(n);
  for (const auto& [b, p] : o.terms_) add_term(b, p);
  head_.clear();
  for (const auto& [n, v] : vals) set_value(n, v);
  return *this;
}

ExpPoly& ExpPoly::operator-=(const ExpPoly& o) { return *this += -o; }

ExpPoly operator*(const ExpPoly& a, const ExpPoly& b) {
  ExpPoly out;
  for (const auto& [ba, pa] : a.terms_)
    for (const auto& [bb, pb] : b.terms_) out.add_term(base_product(ba, bb), pa * pb);
  std::map<unsigned, QuadExt> vals;
  for (const auto* src : {&a.head_, &b.head_})
    for (const auto& [n, v] : *src) vals[n] = a.value(n) * b.value(n);
  for (const auto& [n, v] : vals) out.set_value(n, v);
  return out;
}

ExpPoly ExpPoly::scaled(const RatFunc& c) const {
  ExpPoly out;
  if (c.is_zero()) return out;
  for (const auto& [b, p] : terms_) out.terms_.emplace(b, p.scaled(c));
  for (const auto& [n, v] : head_) out.head_.emplace(n, v * QuadExt(c));
  return out;
}

std::string ExpPoly::str() const {
  if (terms_.empty() && head_.empty()) return "0";
  std::vector<std::pair<bool, std::string>> parts;
  for (int rank = 0; rank < 4; ++rank) {
    for (const auto& [base, p] : terms_) {
      if (render_rank(base) != rank) continue;
      if (base.is_one()) {
        for (const auto& m : p.sorted_monomials()) parts.push_back(term_text(p.coefficient(m), m.is_one() ? "" : m.str()));
        continue;
      }
      std::string power = base.power_str(kCounter);
      if (p.size() == 1) {
        const auto& [m, c] = *p.terms().begin();
        parts.push_back(term_text(c, m.is_one() ? power : m.str() + "*" + power));
      } else {
        parts.emplace_back(false, power + "*(" + p.str() + ")");
      }
    }
  }
  std::string out;
  for (const auto& [neg, body] : parts) {
    if (out.empty())
      out = neg ? "-" + body : body;
    else
      out += (neg ? " - " : " + ") + body;
  }
  if (out.empty()) out = "0";
  if (!head_.empty()) {
    std::string h;
    for (const auto& [n, v] : head_) h += (h.empty() ? "" : ", ") + ("n=" + std::to_string(n) + ": " + v.str());
    out += " [" + h + "]";
  }
  return out;
}

// ---------------------------------------------------------------------------

namespace {

using RootList = std::vector<std::pair<BaseValue, unsigned>>;

RootList eigenvalues(const Matrix<RatFunc>& a) {
  std::size_t n = a.size();
  // Strongly connected blocks of the dependency graph; the characteristic
  // polynomial is the product of the block polynomials.
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::vector<std::vector<std::size_t>> comps;
  int counter = 0;
  std::function<void(std::size_t)> visit = [&](std::size_t v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack[v] = true;
    for (std::size_t w = 0; w < n; ++w) {
      if (a[v][w].is_zero()) continue;
      if (index[w] < 0) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack[w]) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::size_t> c;
      std::size_t w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack[w] = false;
        c.push_back(w);
      } while (w != v);
      std::sort(c.begin(), c.end());
      comps.push_back(c);
    }
  };
  for (std::size_t v = 0; v < n; ++v)
    if (index[v] < 0) visit(v);

  std::map<BaseValue, unsigned> merged;
  for (const auto& c : comps) {
    Matrix<RatFunc> block(c.size(), std::vector<RatFunc>(c.size()));
    std::vector<RatFunc> hints;
    for (std::size_t i = 0; i < c.size(); ++i) {
      for (std::size_t j = 0; j < c.size(); ++j) block[i][j] = a[c[i]][c[j]];
      hints.push_back(block[i][i]);
    }
    for (const auto& [root, mult] : roots_with_multiplicity(charpoly(block), hints)) merged[root] += mult;
  }
  return {merged.begin(), merged.end()};
}

/// Fits sum_{lambda,j} c * n^j lambda^n to seq[r] (the value at n = offset + r)
/// and adds the terms to forms[i] for every component.
void fit_group(const RootList& roots, const std::vector<std::vector<QuadExt>>& seq, unsigned offset,
               const std::vector<StateKey>& keys, std::map<StateKey, ExpPoly>& forms) {
  std::size_t u = 0;
  for (const auto& [root, m] : roots) u += m;
  std::size_t comps = keys.size();
  Matrix<QuadExt> mat(u, std::vector<QuadExt>(u + comps));
  for (std::size_t r = 0; r < u; ++r) {
    unsigned n = offset + static_cast<unsigned>(r);
    std::size_t col = 0;
    for (const auto& [root, m] : roots) {
      QuadExt pw = qpow(root.as_quad(), n);
      for (unsigned j = 0; j < m; ++j) mat[r][col++] = pw * QuadExt(pow(Rational(n), j));
    }
    for (std::size_t i = 0; i < comps; ++i) mat[r][u + i] = seq[r][i];
  }
  auto pivots = row_reduce(mat, u);
  if (pivots.size() != u)
    throw AnalysisError(ErrorKind::InvalidArgument, "solver", "singular initial-value system");
  for (std::size_t i = 0; i < comps; ++i) {
    std::size_t col = 0;
    ExpPoly add;
    for (const auto& [root, m] : roots) {
      Poly coeff;
      for (unsigned j = 0; j < m; ++j) {
        const QuadExt& c = mat[col++][u + i];
        coeff += c.to_poly() * Poly::var(kCounter, j);
      }
      add += ExpPoly::term(root, coeff);
    }
    forms[keys[i]] += add;
  }
}

/// Characteristic factor of a root group over Q(params).
UPoly<RatFunc> group_poly(const RootList& roots) {
  UPoly<RatFunc> out = UPoly<RatFunc>::constant(RatFunc(1));
  for (const auto& [root, m] : roots) {
    UPoly<RatFunc> f;
    if (root.is_surd()) {
      const auto& s = root.surd();
      if (sgn(s.b) < 0) continue;  // covered by its conjugate
      RatFunc a(s.a), norm(s.a * s.a - Rational(s.d) * s.b * s.b);
      f = UPoly<RatFunc>(std::vector<RatFunc>{norm, RatFunc(-2) * a, RatFunc(1)});
    } else {
      f = UPoly<RatFunc>::linear(root.as_ratfunc());
    }
    for (unsigned k = 0; k < m; ++k) out = out * f;
  }
  return out;
}

}  // namespace

std::map<StateKey, ExpPoly> solve_cfinite(const RecurrenceSystem& system) {
  std::size_t n = system.size();
  std::map<StateKey, ExpPoly> forms;
  for (const auto& k : system.state) forms[k];
  if (n == 0) return forms;

  RootList roots = eigenvalues(system.matrix);
  unsigned zero_mult = 0;
  std::map<long, RootList> groups;
  std::size_t total = 0;
  for (const auto& [root, m] : roots) {
    total += m;
    if (root.is_zero())
      zero_mult = m;
    else
      groups[root.surd_d()].emplace_back(root, m);
  }

  std::size_t steps = 2 * n + 4;
  auto iterates = system.iterate(steps);
  auto value = [&](std::size_t step, std::size_t i) { return QuadExt(iterates[step][i]); };

  if (groups.size() <= 1) {
    if (!groups.empty()) {
      const RootList& g = groups.begin()->second;
      std::size_t u = 0;
      for (const auto& [r, m] : g) u += m;
      std::vector<std::vector<QuadExt>> seq(u, std::vector<QuadExt>(n));
      for (std::size_t r = 0; r < u; ++r)
        for (std::size_t i = 0; i < n; ++i) seq[r][i] = value(zero_mult + r, i);
      fit_group(g, seq, zero_mult, system.state, forms);
    }
  } else {
    // Project onto each group with the CRT idempotent in the shift operator.
    std::map<long, UPoly<RatFunc>> polys;
    UPoly<RatFunc> chi = UPoly<RatFunc>::monomial(zero_mult);
    for (const auto& [d, g] : groups) {
      polys[d] = group_poly(g);
      chi = chi * polys[d];
    }
    for (const auto& [d, g] : groups) {
      UPoly<RatFunc> cofactor = chi / polys[d];
      auto eg = extended_gcd(cofactor, polys[d]);
      UPoly<RatFunc> idem = (eg.s * cofactor) % chi;
      std::size_t u = static_cast<std::size_t>(polys[d].degree());
      std::vector<std::vector<QuadExt>> seq(u, std::vector<QuadExt>(n));
      for (std::size_t r = 0; r < u; ++r)
        for (std::size_t i = 0; i < n; ++i) {
          RatFunc acc;
          for (std::size_t t = 0; t < idem.coeffs().size(); ++t)
            if (!idem.coeffs()[t].is_zero()) acc += idem.coeffs()[t] * iterates[r + t][i];
          seq[r][i] = QuadExt(acc);
        }
      fit_group(g, seq, 0, system.state, forms);
    }
  }

  // Exceptions below the zero-eigenvalue index, then a sanity check.
  for (std::size_t i = 0; i < n; ++i) {
    ExpPoly& f = forms[system.state[i]];
    for (unsigned s = 0; s < zero_mult; ++s) f.set_value(s, value(s, i));
    for (std::size_t s = 0; s <= std::min(steps, total + 3); ++s)
      if (!(f.value(static_cast<unsigned>(s)) == value(s, i)))
        throw AnalysisError(ErrorKind::InvalidArgument, "solver",
                            "closed form of " + system.state[i].str() + " does not reproduce step " +
                                std::to_string(s));
  }
  return forms;
}

ExpPoly combine(const Poly& p, const std::map<StateKey, ExpPoly>& forms, bool derivative) {
  ExpPoly out;
  for (const auto& [m, c] : p.terms()) {
    if (m.is_one() && !derivative) {
      out += ExpPoly(c);
      continue;
    }
    auto it = forms.find(StateKey{m, derivative});
    if (it == forms.end())
      throw AnalysisError(ErrorKind::InvalidArgument, "solver", "no closed form for " + StateKey{m, derivative}.str());
    out += it->second.scaled(c);
  }
  return out;
}

QuadExt evaluate_at(const ExpPoly& cf, unsigned n, const Bindings& bindings) {
  QuadExt v = cf.value(n);
  return QuadExt(RatFunc(v.a().evaluate(bindings)), RatFunc(v.b().evaluate(bindings)), v.d());
}

double to_double(const QuadExt& v) {
  auto a = v.a().as_rational(), b = v.b().as_rational();
  if (!a || !b) throw AnalysisError(ErrorKind::UnboundParameter, "solver", "value still mentions parameters");
  if (sgn(*b) == 0) return to_double(*a);
  if (v.d() < 0) throw AnalysisError(ErrorKind::InvalidArgument, "solver", "complex value " + v.str());
  return to_double(*a) + to_double(*b) * std::sqrt(static_cast<double>(v.d()));
}

std::string Limit::str() const {
  switch (kind) {
    case Kind::Value:
      return value.str();
    case Kind::NoLimit:
      return "no limit";
    case Kind::Diverges:
      return "diverges";
  }
  return "";
}

Limit limit_at_infinity(const ExpPoly& cf) {
  Limit out;
  bool oscillates = false, diverges = false;
  for (const auto& [base, p] : cf.terms()) {
    if (base.is_param())
      throw AnalysisError(ErrorKind::ParamCondition, "solver",
                          "convergence of " + base.power_str(kCounter) + " depends on the parameter range");
    if (base.is_one()) {
      if (p.degree(kCounter) > 0) {
        diverges = true;
        continue;
      }
      for (const auto& v : p.variables())
        if (parse_surd_symbol(v))
          throw AnalysisError(ErrorKind::InvalidArgument, "solver", "irrational limit " + p.str());
      out.value = p.constant_term();
      continue;
    }
    double mag = base.approx_abs();
    if (mag > 1 + 1e-12)
      diverges = true;
    else if (mag > 1 - 1e-12)
      oscillates = true;
  }
  if (diverges) out.kind = Limit::Kind::Diverges;
  else if (oscillates) out.kind = Limit::Kind::NoLimit;
  return out;
}

ExpPoly diff(const ExpPoly& cf, const std::string& param) {
  ExpPoly out;
  auto d_poly = [&](const Poly& p) {
    Poly r;
    for (const auto& [m, c] : p.terms()) r.add_term(m, c.derivative(param));
    return r;
  };
  for (const auto& [base, p] : cf.terms()) {
    out += ExpPoly::term(base, d_poly(p));
    if (base.is_param()) {
      RatFunc lam = base.param();
      RatFunc ratio = lam.derivative(param) / lam;
      out += ExpPoly::term(base, (p * Poly::var(kCounter)).scaled(ratio));
    }
  }
  for (const auto& [n, v] : cf.head())
    out.set_value(n, QuadExt(v.a().derivative(param), v.b().derivative(param), v.d()));
  return out;
}

}  // namespace loopm
