#include "loopm/invariants.hpp"

#include <algorithm>
#include <set>

#include "loopm/errors.hpp"
#include "loopm/limits.hpp"

namespace loopm {

namespace {

void add_prime_exponents(const Integer& n, int sign, std::map<Integer, long>& out) {
  if (n == 1) return;
  for (const auto& [p, e] : factor_integer(n)) out[p] += sign * static_cast<long>(e);
}

std::map<Integer, long> prime_exponents(const Rational& q) {
  std::map<Integer, long> out;
  add_prime_exponents(abs(q.get_num()), 1, out);
  add_prime_exponents(q.get_den(), -1, out);
  return out;
}

Poly power_product(const std::vector<std::string>& names, const std::vector<long>& exps) {
  std::vector<Monomial::Factor> fs;
  for (std::size_t i = 0; i < names.size(); ++i)
    if (exps[i] > 0) fs.emplace_back(names[i], static_cast<unsigned>(exps[i]));
  return Poly::term(Monomial::from_factors(std::move(fs)), RatFunc(1));
}

/// Binomials from the doubled system A u = A w plus sign parity.
std::vector<Poly> rational_relations(const std::vector<Rational>& bases, const std::vector<std::string>& names) {
  std::size_t k = bases.size();
  std::vector<std::map<Integer, long>> exps;
  std::set<Integer> primes;
  bool any_negative = false;
  for (const auto& b : bases) {
    exps.push_back(prime_exponents(b));
    for (const auto& [p, e] : exps.back()) primes.insert(p);
    if (sgn(b) < 0) any_negative = true;
  }
  std::size_t unknowns = 2 * k + (any_negative ? 2 : 0);
  DioSystem sys;
  for (const auto& p : primes) {
    std::vector<long> row(unknowns, 0);
    for (std::size_t i = 0; i < k; ++i) {
      auto it = exps[i].find(p);
      long e = it == exps[i].end() ? 0 : it->second;
      row[i] = e;
      row[k + i] = -e;
    }
    sys.push_back(row);
  }
  if (any_negative) {
    std::vector<long> row(unknowns, 0);
    for (std::size_t i = 0; i < k; ++i) {
      long s = sgn(bases[i]) < 0 ? 1 : 0;
      row[i] = s;
      row[k + i] = -s;
    }
    row[2 * k] = -2;
    row[2 * k + 1] = 2;
    sys.push_back(row);
  }
  std::vector<Poly> out;
  std::set<std::pair<std::vector<long>, std::vector<long>>> seen;
  for (const auto& v : hilbert_basis_nat(sys, unknowns)) {
    std::vector<long> u(v.begin(), v.begin() + static_cast<long>(k)), w(v.begin() + static_cast<long>(k),
                                                                           v.begin() + static_cast<long>(2 * k));
    if (u == w) continue;
    if (u < w) std::swap(u, w);
    if (!seen.insert({u, w}).second) continue;
    out.push_back(power_product(names, u) - power_product(names, w));
  }
  return out;
}

AlgNumber as_alg(const BaseValue& b) {
  return b.is_surd() ? AlgNumber::from_surd(b.surd()) : AlgNumber(RatFunc(b.rational()));
}

/// Exhaustive search over exponent vectors in [-E, E] that touch a surd base.
std::vector<Poly> surd_relations(const std::vector<BaseValue>& bases, const std::vector<std::string>& names) {
  const int bound = ResourceLimits::current().surd_exponent_bound;
  std::size_t k = bases.size();
  double combos = 1;
  for (std::size_t i = 0; i < k; ++i) combos *= 2 * bound + 1;
  if (combos > 5e6)
    throw AnalysisError(ErrorKind::ResourceLimit, "invariants",
                        "surd relation search over " + std::to_string(k) + " bases exceeds the budget");
  std::vector<std::vector<AlgNumber>> powers(k);
  for (std::size_t i = 0; i < k; ++i) {
    powers[i].push_back(AlgNumber(RatFunc(1)));
    AlgNumber b = as_alg(bases[i]);
    for (int e = 1; e <= bound; ++e) powers[i].push_back(powers[i].back() * b);
  }
  std::vector<Poly> out;
  std::vector<long> v(k, -bound);
  while (true) {
    // Canonical sign: first nonzero entry positive; must involve a surd.
    std::size_t first = 0;
    while (first < k && v[first] == 0) ++first;
    bool surd = false;
    for (std::size_t i = 0; i < k; ++i)
      if (v[i] != 0 && bases[i].is_surd()) surd = true;
    if (first < k && v[first] > 0 && surd) {
      AlgNumber lhs(RatFunc(1)), rhs(RatFunc(1));
      std::vector<long> u(k, 0), w(k, 0);
      for (std::size_t i = 0; i < k; ++i) {
        if (v[i] > 0) {
          lhs = lhs * powers[i][v[i]];
          u[i] = v[i];
        } else if (v[i] < 0) {
          rhs = rhs * powers[i][-v[i]];
          w[i] = -v[i];
        }
      }
      if (lhs == rhs) out.push_back(power_product(names, u) - power_product(names, w));
    }
    std::size_t i = 0;
    while (i < k && v[i] == bound) v[i++] = -bound;
    if (i == k) break;
    ++v[i];
  }
  return out;
}

Poly point_ideal_generator(const std::string& sym, const RatFunc& value) {
  return Poly::var(sym) - Poly(value);
}

/// I ∩ J via elimination of an auxiliary t from t*I + (1 - t)*J.
std::vector<Poly> intersect(const std::vector<Poly>& a, const std::vector<Poly>& b,
                            const std::vector<std::string>& symbols) {
  const std::string t = "_t";
  std::vector<Poly> gens;
  Poly tp = Poly::var(t);
  for (const auto& g : a) gens.push_back(tp * g);
  for (const auto& g : b) gens.push_back((Poly(1) - tp) * g);
  if (a.empty()) return {};
  std::vector<std::string> vars{t};
  vars.insert(vars.end(), symbols.begin(), symbols.end());
  return eliminate_vars(Ideal{gens, MonomialOrder::lex(vars)}, {t}).generators;
}

}  // namespace

DioSystem balance_system(const std::vector<Rational>& bases) {
  std::vector<std::map<Integer, long>> exps;
  std::set<Integer> primes;
  for (const auto& b : bases) {
    exps.push_back(prime_exponents(b));
    for (const auto& [p, e] : exps.back()) primes.insert(p);
  }
  DioSystem sys;
  for (const auto& p : primes) {
    std::vector<long> row;
    for (const auto& e : exps) {
      auto it = e.find(p);
      row.push_back(it == e.end() ? 0 : it->second);
    }
    sys.push_back(row);
  }
  return sys;
}

std::vector<Poly> mult_relations(const std::vector<BaseValue>& bases, const std::vector<std::string>& names) {
  std::vector<Rational> rational;
  std::vector<std::string> rational_names;
  std::vector<BaseValue> numeric;
  std::vector<std::string> numeric_names;
  bool any_surd = false;
  for (std::size_t i = 0; i < bases.size(); ++i) {
    if (bases[i].is_zero())
      throw AnalysisError(ErrorKind::InvalidArgument, "invariants", "zero exponential base");
    if (bases[i].is_param()) continue;
    numeric.push_back(bases[i]);
    numeric_names.push_back(names[i]);
    if (bases[i].is_rational()) {
      rational.push_back(bases[i].rational());
      rational_names.push_back(names[i]);
    } else {
      any_surd = true;
    }
  }
  std::vector<Poly> out;
  if (!rational.empty()) out = rational_relations(rational, rational_names);
  if (any_surd) {
    auto more = surd_relations(numeric, numeric_names);
    out.insert(out.end(), more.begin(), more.end());
  }
  return out;
}

ExpPoly shift(const ExpPoly& f, unsigned k) {
  if (k == 0) return f;
  ExpPoly out;
  Poly moved = Poly::var(kCounter) + Poly(RatFunc(Rational(k)));
  for (const auto& [base, p] : f.terms()) {
    QuadExt scale(1);
    QuadExt b = base.as_quad();
    for (unsigned i = 0; i < k; ++i) scale *= b;
    out += ExpPoly::term(base, p.substitute(kCounter, moved) * scale.to_poly());
  }
  for (const auto& [n, v] : f.head())
    if (n >= k) out.set_value(n - k, v);
  return out;
}

ExpPoly substitute_forms(const Poly& g, const std::vector<std::pair<std::string, ExpPoly>>& forms) {
  std::map<std::string, const ExpPoly*> lookup;
  for (const auto& [s, f] : forms) lookup[s] = &f;
  ExpPoly out;
  for (const auto& [m, c] : g.terms()) {
    ExpPoly term(c);
    for (const auto& [v, e] : m.factors()) {
      auto it = lookup.find(v);
      if (it == lookup.end())
        throw AnalysisError(ErrorKind::InvalidArgument, "invariants", "no closed form for symbol " + v);
      for (unsigned i = 0; i < e; ++i) term = term * *it->second;
    }
    out += term;
  }
  return out;
}

Poly clear_denominators(const Poly& g, const MonomialOrder& order) {
  if (g.is_zero()) return g;
  QPoly l = QPoly(Rational(1));
  for (const auto& [m, c] : g.terms()) {
    QPoly d = c.den();
    QPoly common = gcd(l, d);
    l = *exact_divide(l * d, common);
  }
  Poly scaled = g.scaled(RatFunc(l));
  QPoly content;
  for (const auto& [m, c] : scaled.terms()) content = content.is_zero() ? c.num() : gcd(content, c.num());
  if (!content.is_constant()) scaled = scaled.scaled(RatFunc(QPoly(Rational(1)), content));
  // Leading coefficient: positive lex-leading term, rational content 1.
  QPoly lead = scaled.coefficient(order.leading_monomial(scaled)).num();
  Rational c = rational_content(lead);
  auto terms = lead.sorted_monomials(lex_greater);
  if (sgn(lead.coefficient(terms.front())) < 0) c = -c;
  return scaled.scaled(RatFunc(1 / c));
}

std::vector<std::string> InvariantBasis::lines() const {
  std::vector<std::string> out;
  MonomialOrder o = order();
  for (const auto& g : generators)
    out.push_back(g.str([&](const Monomial& a, const Monomial& b) { return o.greater(a, b); }) + " = 0");
  return out;
}

InvariantBasis invariant_basis(const std::vector<std::pair<std::string, ExpPoly>>& raw_forms) {
  InvariantBasis out;
  unsigned k = 0;
  for (const auto& [s, f] : raw_forms) {
    out.symbols.push_back(s);
    for (const auto& [n, v] : f.head()) k = std::max(k, n + 1);
  }

  std::set<BaseValue> base_set;
  std::set<long> surds;
  std::vector<std::pair<std::string, ExpPoly>> forms;
  for (const auto& [s, f] : raw_forms) {
    forms.emplace_back(s, shift(f, k));
    for (const auto& [b, p] : forms.back().second.terms())
      if (!b.is_one()) base_set.insert(b);
    auto ds = forms.back().second.surds();
    surds.insert(ds.begin(), ds.end());
  }
  std::vector<BaseValue> bases(base_set.begin(), base_set.end());
  std::vector<std::string> names;
  for (std::size_t i = 0; i < bases.size(); ++i) names.push_back("_e" + std::to_string(i));

  std::vector<Poly> gens;
  for (const auto& [s, f] : forms) {
    Poly g = Poly::var(s);
    for (const auto& [b, p] : f.terms()) {
      if (b.is_one()) {
        g -= p;
        continue;
      }
      auto pos = std::find(bases.begin(), bases.end(), b) - bases.begin();
      g -= p * Poly::var(names[static_cast<std::size_t>(pos)]);
    }
    gens.push_back(g);
  }
  auto rel = mult_relations(bases, names);
  gens.insert(gens.end(), rel.begin(), rel.end());
  bool has_surd_base = std::any_of(bases.begin(), bases.end(), [](const BaseValue& b) { return b.is_surd(); });
  if (has_surd_base)
    out.notes.push_back("relations among irrational bases come from a bounded exponent search");

  std::vector<std::string> vars{kCounter};
  std::set<std::string> kill{kCounter};
  for (const auto& nm : names) {
    vars.push_back(nm);
    kill.insert(nm);
  }
  for (long d : surds) {
    std::string s = surd_symbol(d);
    vars.push_back(s);
    kill.insert(s);
    gens.push_back(Poly::var(s, 2) - Poly(RatFunc(Rational(d))));
  }
  vars.insert(vars.end(), out.symbols.begin(), out.symbols.end());
  std::vector<Poly> basis = eliminate_vars(Ideal{gens, MonomialOrder::lex(vars)}, kill).generators;

  // Values before the zero-eigenvalue index are separate points.
  for (unsigned n = 0; n < k; ++n) {
    std::vector<Poly> point;
    for (const auto& [s, f] : raw_forms) {
      QuadExt v = f.value(n);
      if (!v.b().is_zero())
        throw AnalysisError(ErrorKind::InvalidArgument, "invariants", "irrational initial value of " + s);
      point.push_back(point_ideal_generator(s, v.a()));
    }
    basis = intersect(basis, point, out.symbols);
  }

  for (const auto& g : basis) out.generators.push_back(clear_denominators(g, out.order()));
  return out;
}

bool membership_check(const Poly& candidate, const InvariantBasis& basis) {
  for (const auto& v : candidate.variables())
    if (std::find(basis.symbols.begin(), basis.symbols.end(), v) == basis.symbols.end())
      throw AnalysisError(ErrorKind::InvalidArgument, "invariants", "'" + v + "' is not a goal symbol of the basis");
  return normal_form(candidate, basis.generators, basis.order()).is_zero();
}

}  // namespace loopm
