#include "loopm/groebner.hpp"

#include <algorithm>
#include <map>

#include "loopm/errors.hpp"
#include "loopm/limits.hpp"

namespace loopm {

namespace {

using Exp = std::vector<unsigned>;

unsigned total(const Exp& e, std::size_t from = 0, std::size_t to = SIZE_MAX) {
  unsigned d = 0;
  for (std::size_t i = from; i < std::min(to, e.size()); ++i) d += e[i];
  return d;
}

// a > b in reverse-lex on [from, to): the last differing exponent is smaller.
int revlex(const Exp& a, const Exp& b, std::size_t from, std::size_t to) {
  for (std::size_t i = to; i-- > from;) {
    if (a[i] != b[i]) return a[i] < b[i] ? 1 : -1;
  }
  return 0;
}

int grevlex(const Exp& a, const Exp& b, std::size_t from, std::size_t to) {
  unsigned da = total(a, from, to), db = total(b, from, to);
  if (da != db) return da > db ? 1 : -1;
  return revlex(a, b, from, to);
}

int compare(OrderKind kind, std::size_t block, const Exp& a, const Exp& b) {
  switch (kind) {
    case OrderKind::Lex:
      for (std::size_t i = 0; i < a.size(); ++i)
        if (a[i] != b[i]) return a[i] > b[i] ? 1 : -1;
      return 0;
    case OrderKind::DegRevLex:
      return grevlex(a, b, 0, a.size());
    case OrderKind::Elimination: {
      int c = grevlex(a, b, 0, block);
      return c != 0 ? c : grevlex(a, b, block, a.size());
    }
  }
  return 0;
}

struct Greater {
  OrderKind kind;
  std::size_t block;
  bool operator()(const Exp& a, const Exp& b) const { return compare(kind, block, a, b) > 0; }
};

bool divides(const Exp& a, const Exp& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > b[i]) return false;
  return true;
}

Exp lcm(const Exp& a, const Exp& b) {
  Exp out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = std::max(a[i], b[i]);
  return out;
}

Exp minus(const Exp& a, const Exp& b) {
  Exp out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

Exp plus(const Exp& a, const Exp& b) {
  Exp out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] + b[i];
  return out;
}

bool coprime(const Exp& a, const Exp& b) {
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] > 0 && b[i] > 0) return false;
  return true;
}

template <class K>
K coeff_from(const RatFunc& c);
template <>
Rational coeff_from<Rational>(const RatFunc& c) {
  return *c.as_rational();
}
template <>
RatFunc coeff_from<RatFunc>(const RatFunc& c) {
  return c;
}

/// Polynomial with terms sorted by decreasing monomial.
template <class K>
struct DPoly {
  std::vector<std::pair<Exp, K>> terms;
  unsigned sugar = 0;
  bool is_zero() const { return terms.empty(); }
  const Exp& lm() const { return terms.front().first; }
  const K& lc() const { return terms.front().second; }
};

template <class K>
class Engine {
 public:
  explicit Engine(const MonomialOrder& order) : order_(order), greater_{order.kind, order.block} {
    for (std::size_t i = 0; i < order.vars.size(); ++i) index_[order.vars[i]] = i;
  }

  DPoly<K> to_dense(const Poly& p) const {
    DPoly<K> out;
    for (const auto& [m, c] : p.terms()) {
      Exp e(order_.vars.size(), 0);
      for (const auto& [v, k] : m.factors()) {
        auto it = index_.find(v);
        if (it == index_.end())
          throw AnalysisError(ErrorKind::InvalidArgument, "algebra",
                              "variable '" + v + "' is not part of the monomial order");
        e[it->second] = k;
      }
      out.terms.emplace_back(std::move(e), coeff_from<K>(c));
    }
    sort(out);
    for (const auto& [e, c] : out.terms) out.sugar = std::max(out.sugar, total(e));
    return out;
  }

  Poly to_poly(const DPoly<K>& p) const {
    Poly out;
    for (const auto& [e, c] : p.terms) {
      std::vector<Monomial::Factor> fs;
      for (std::size_t i = 0; i < e.size(); ++i)
        if (e[i] > 0) fs.emplace_back(order_.vars[i], e[i]);
      out.add_term(Monomial::from_factors(std::move(fs)), RatFunc(c));
    }
    return out;
  }

  void sort(DPoly<K>& p) const {
    std::sort(p.terms.begin(), p.terms.end(),
              [&](const auto& a, const auto& b) { return greater_(a.first, b.first); });
  }

  void make_monic(DPoly<K>& p) const {
    if (p.is_zero()) return;
    K inv = K(1) / p.lc();
    for (auto& t : p.terms) t.second = t.second * inv;
  }

  /// Full reduction of f by the polynomials of `basis` flagged in `use`.
  DPoly<K> reduce(const DPoly<K>& f, const std::vector<DPoly<K>>& basis, const std::vector<bool>& use) const {
    std::map<Exp, K, Greater> rem(greater_);
    for (const auto& [e, c] : f.terms) rem.emplace(e, c);
    DPoly<K> out;
    out.sugar = f.sugar;
    std::size_t limit = ResourceLimits::current().max_poly_terms;
    while (!rem.empty()) {
      auto top = rem.begin();
      const DPoly<K>* div = nullptr;
      for (std::size_t i = 0; i < basis.size(); ++i) {
        if (!use[i] || basis[i].is_zero()) continue;
        if (divides(basis[i].lm(), top->first)) {
          div = &basis[i];
          break;
        }
      }
      if (!div) {
        out.terms.emplace_back(top->first, top->second);
        rem.erase(top);
        continue;
      }
      Exp shift = minus(top->first, div->lm());
      K factor = top->second / div->lc();
      rem.erase(top);
      for (std::size_t t = 1; t < div->terms.size(); ++t) {
        Exp e = plus(div->terms[t].first, shift);
        K c = div->terms[t].second * factor;
        auto [it, inserted] = rem.emplace(e, -c);
        if (!inserted) {
          it->second = it->second - c;
          if (is_zero(it->second)) rem.erase(it);
        }
      }
      if (rem.size() > limit)
        throw AnalysisError(ErrorKind::ResourceLimit, "algebra", "polynomial exceeds the term limit during reduction");
    }
    return out;
  }

  DPoly<K> spoly(const DPoly<K>& f, const DPoly<K>& g) const {
    Exp l = lcm(f.lm(), g.lm());
    Exp sf = minus(l, f.lm()), sg = minus(l, g.lm());
    std::map<Exp, K, Greater> acc(greater_);
    K cf = K(1) / f.lc(), cg = K(1) / g.lc();
    for (const auto& [e, c] : f.terms) acc.emplace(plus(e, sf), c * cf);
    for (const auto& [e, c] : g.terms) {
      Exp x = plus(e, sg);
      K v = c * cg;
      auto [it, inserted] = acc.emplace(x, -v);
      if (!inserted) {
        it->second = it->second - v;
        if (is_zero(it->second)) acc.erase(it);
      }
    }
    DPoly<K> out;
    for (auto& [e, c] : acc) out.terms.emplace_back(e, c);
    out.sugar = std::max(f.sugar + total(sf), g.sugar + total(sg));
    return out;
  }

  std::vector<DPoly<K>> buchberger(const std::vector<DPoly<K>>& input) {
    struct Pair {
      std::size_t i, j;
      Exp lcm;
      unsigned sugar;
    };
    std::vector<DPoly<K>> g;
    std::vector<bool> active;
    std::vector<Pair> pairs;
    std::size_t processed = 0;
    std::size_t max_pairs = ResourceLimits::current().max_spairs;

    auto pair_sugar = [&](std::size_t i, std::size_t j, const Exp& l) {
      return std::max(g[i].sugar + total(l) - total(g[i].lm()), g[j].sugar + total(l) - total(g[j].lm()));
    };

    // Gebauer-Moeller update with the new polynomial h = g.back().
    auto update = [&]() {
      std::size_t h = g.size() - 1;
      const Exp& lh = g[h].lm();
      std::vector<Pair> c;
      for (std::size_t k = 0; k < h; ++k)
        if (active[k]) c.push_back({k, h, lcm(g[k].lm(), lh), 0});
      std::vector<Pair> d;
      for (std::size_t a = 0; a < c.size(); ++a) {
        bool keep = coprime(g[c[a].i].lm(), lh);
        if (!keep) {
          keep = true;
          for (std::size_t b = a + 1; b < c.size() && keep; ++b)
            if (divides(c[b].lcm, c[a].lcm)) keep = false;
          for (std::size_t b = 0; b < d.size() && keep; ++b)
            if (divides(d[b].lcm, c[a].lcm)) keep = false;
        }
        if (keep) d.push_back(c[a]);
      }
      std::vector<Pair> e;
      for (auto& p : d)
        if (!coprime(g[p.i].lm(), lh)) {
          p.sugar = pair_sugar(p.i, p.j, p.lcm);
          e.push_back(p);
        }
      std::vector<Pair> kept;
      for (const auto& p : pairs) {
        bool drop = divides(lh, p.lcm) && lcm(g[p.i].lm(), lh) != p.lcm && lcm(g[p.j].lm(), lh) != p.lcm;
        if (!drop) kept.push_back(p);
      }
      for (auto& p : e) kept.push_back(std::move(p));
      pairs = std::move(kept);
      for (std::size_t k = 0; k < h; ++k)
        if (active[k] && divides(lh, g[k].lm())) active[k] = false;
      active.push_back(true);
    };

    for (const auto& f : input) {
      DPoly<K> h = reduce(f, g, active);
      if (h.is_zero()) continue;
      make_monic(h);
      g.push_back(std::move(h));
      update();
    }

    while (!pairs.empty()) {
      auto best = pairs.begin();
      for (auto it = pairs.begin(); it != pairs.end(); ++it) {
        if (it->sugar < best->sugar || (it->sugar == best->sugar && greater_(best->lcm, it->lcm))) best = it;
      }
      Pair p = *best;
      pairs.erase(best);
      if (++processed > max_pairs)
        throw AnalysisError(ErrorKind::ResourceLimit, "algebra",
                            "Groebner basis computation exceeded " + std::to_string(max_pairs) + " S-pairs");
      DPoly<K> s = spoly(g[p.i], g[p.j]);
      DPoly<K> h = reduce(s, g, active);
      if (h.is_zero()) continue;
      make_monic(h);
      g.push_back(std::move(h));
      update();
    }

    std::vector<DPoly<K>> basis;
    for (std::size_t k = 0; k < g.size(); ++k)
      if (active[k]) basis.push_back(g[k]);
    return interreduce(std::move(basis));
  }

  std::vector<DPoly<K>> interreduce(std::vector<DPoly<K>> basis) const {
    std::sort(basis.begin(), basis.end(), [&](const auto& a, const auto& b) { return greater_(a.lm(), b.lm()); });
    std::vector<DPoly<K>> minimal;
    for (std::size_t a = 0; a < basis.size(); ++a) {
      bool redundant = false;
      for (std::size_t b = 0; b < basis.size() && !redundant; ++b) {
        if (a == b) continue;
        if (divides(basis[b].lm(), basis[a].lm()) && (basis[a].lm() != basis[b].lm() || b < a)) redundant = true;
      }
      if (!redundant) minimal.push_back(basis[a]);
    }
    std::vector<DPoly<K>> out;
    for (std::size_t a = 0; a < minimal.size(); ++a) {
      std::vector<bool> use(minimal.size(), true);
      use[a] = false;
      DPoly<K> r = reduce(minimal[a], minimal, use);
      make_monic(r);
      out.push_back(std::move(r));
    }
    return out;
  }

  const MonomialOrder& order_;
  Greater greater_;
  std::map<std::string, std::size_t> index_;
};

bool all_rational(const std::vector<Poly>& ps) {
  for (const auto& p : ps)
    if (!parameter_free(p)) return false;
  return true;
}

template <class K>
std::vector<Poly> run_groebner(const std::vector<Poly>& gens, const MonomialOrder& order) {
  Engine<K> engine(order);
  std::vector<DPoly<K>> input;
  for (const auto& p : gens)
    if (!p.is_zero()) input.push_back(engine.to_dense(p));
  std::vector<Poly> out;
  for (const auto& d : engine.buchberger(input)) out.push_back(engine.to_poly(d));
  return out;
}

template <class K>
Poly run_normal_form(const Poly& f, const std::vector<Poly>& basis, const MonomialOrder& order) {
  Engine<K> engine(order);
  std::vector<DPoly<K>> b;
  for (const auto& p : basis)
    if (!p.is_zero()) b.push_back(engine.to_dense(p));
  std::vector<bool> use(b.size(), true);
  return engine.to_poly(engine.reduce(engine.to_dense(f), b, use));
}

template <class K>
bool run_criterion(const std::vector<Poly>& basis, const MonomialOrder& order) {
  Engine<K> engine(order);
  std::vector<DPoly<K>> b;
  for (const auto& p : basis)
    if (!p.is_zero()) b.push_back(engine.to_dense(p));
  std::vector<bool> use(b.size(), true);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = i + 1; j < b.size(); ++j)
      if (!engine.reduce(engine.spoly(b[i], b[j]), b, use).is_zero()) return false;
  return true;
}

}  // namespace

bool MonomialOrder::greater(const Monomial& a, const Monomial& b) const {
  auto exp = [&](const Monomial& m) {
    Exp e(vars.size(), 0);
    for (const auto& [v, k] : m.factors()) {
      auto it = std::find(vars.begin(), vars.end(), v);
      if (it == vars.end())
        throw AnalysisError(ErrorKind::InvalidArgument, "algebra", "variable '" + v + "' is not part of the monomial order");
      e[it - vars.begin()] = k;
    }
    return e;
  };
  return compare(kind, block, exp(a), exp(b)) > 0;
}

Monomial MonomialOrder::leading_monomial(const Poly& p) const {
  Monomial best;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    if (first || greater(m, best)) best = m;
    first = false;
  }
  return best;
}

std::vector<Poly> groebner_basis(const std::vector<Poly>& gens, const MonomialOrder& order) {
  if (all_rational(gens)) return run_groebner<Rational>(gens, order);
  return run_groebner<RatFunc>(gens, order);
}

Poly normal_form(const Poly& f, const std::vector<Poly>& basis, const MonomialOrder& order) {
  std::vector<Poly> all = basis;
  all.push_back(f);
  if (all_rational(all)) return run_normal_form<Rational>(f, basis, order);
  return run_normal_form<RatFunc>(f, basis, order);
}

bool satisfies_buchberger_criterion(const std::vector<Poly>& basis, const MonomialOrder& order) {
  if (all_rational(basis)) return run_criterion<Rational>(basis, order);
  return run_criterion<RatFunc>(basis, order);
}

Ideal eliminate_vars(const Ideal& ideal, const std::set<std::string>& kill) {
  MonomialOrder elim;
  elim.kind = OrderKind::Elimination;
  std::vector<std::string> keep;
  for (const auto& v : ideal.order.vars) {
    if (kill.count(v))
      elim.vars.push_back(v);
    else
      keep.push_back(v);
  }
  elim.block = elim.vars.size();
  for (const auto& v : keep) elim.vars.push_back(v);
  std::vector<Poly> survivors;
  for (const auto& g : groebner_basis(ideal.generators, elim)) {
    bool free = true;
    for (const auto& v : kill)
      if (g.contains(v)) free = false;
    if (free) survivors.push_back(g);
  }
  Ideal out;
  out.order = MonomialOrder::lex(keep);
  out.generators = survivors.empty() ? survivors : groebner_basis(survivors, out.order);
  return out;
}

}  // namespace loopm
