#pragma once

#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "loopm/ast.hpp"

namespace loopm::testing {

/// Exact distribution of the state after n iterations for programs whose
/// randomness is finite (choices, Bernoulli, Categorical, DiscreteUniform).
/// Written against the AST only, independent of the moment machinery.
class Enumerator {
 public:
  using State = std::vector<Rational>;
  using Dist = std::map<State, Rational>;

  Enumerator(const Ast& ast, Bindings bindings) : ast_(ast), bind_(std::move(bindings)) {
    for (std::size_t i = 0; i < ast.variables.size(); ++i) slot_[ast.variables[i]] = i;
  }

  Dist initial() const {
    Dist d{{State(slot_.size(), Rational(0)), Rational(1)}};
    return exec(ast_.init, d);
  }

  Dist step(const Dist& d) const {
    if (!ast_.guard) return exec(ast_.body, d);
    Dist run, stay;
    for (const auto& [s, p] : d) (test(*ast_.guard, s) ? run : stay)[s] += p;
    Dist out = exec(ast_.body, run);
    for (const auto& [s, p] : stay) out[s] += p;
    return out;
  }

  /// E(monomial) for each n = 0..steps.
  std::vector<Rational> moments(const Monomial& m, unsigned steps) const {
    std::vector<Rational> out;
    Dist d = initial();
    for (unsigned n = 0; n <= steps; ++n) {
      Rational acc = 0;
      for (const auto& [s, p] : d) {
        Rational v = 1;
        for (const auto& [name, e] : m.factors()) v *= pow(s[slot_.at(name)], e);
        acc += p * v;
      }
      out.push_back(acc);
      if (n < steps) d = step(d);
    }
    return out;
  }

 private:
  Dist exec(const Block& block, Dist d) const {
    for (const auto& st : block) {
      if (st.kind == Statement::Kind::If) {
        Dist yes, no;
        for (const auto& [s, p] : d) (test(*st.cond, s) ? yes : no)[s] += p;
        yes = exec(st.then_body, yes);
        no = exec(st.else_body, no);
        d.clear();
        for (const auto& [s, p] : yes) d[s] += p;
        for (const auto& [s, p] : no) d[s] += p;
        continue;
      }
      Dist next;
      for (const auto& [s, p] : d) {
        // Simultaneous assignment: product of the per-target outcomes.
        std::vector<std::vector<std::pair<Rational, Rational>>> outcomes;
        for (const auto& rhs : st.assign.rhs) outcomes.push_back(values(rhs, s));
        std::vector<std::size_t> idx(outcomes.size(), 0);
        while (true) {
          State t = s;
          Rational q = p;
          for (std::size_t k = 0; k < idx.size(); ++k) {
            t[slot_.at(st.assign.targets[k])] = outcomes[k][idx[k]].first;
            q *= outcomes[k][idx[k]].second;
          }
          if (q != 0) next[t] += q;
          std::size_t k = 0;
          while (k < idx.size() && ++idx[k] == outcomes[k].size()) idx[k++] = 0;
          if (k == idx.size()) break;
        }
      }
      d = std::move(next);
    }
    return d;
  }

  std::vector<std::pair<Rational, Rational>> values(const Rhs& rhs, const State& s) const {
    std::vector<std::pair<Rational, Rational>> out;
    if (!rhs.draw) {
      for (const auto& b : rhs.choices) out.emplace_back(eval(*b.value, s), b.prob.evaluate(bind_));
      return out;
    }
    const auto& d = *rhs.draw;
    std::vector<Rational> a;
    for (const auto& x : d.args) a.push_back(eval(*x, s));
    Rational shift = d.shift ? eval(*d.shift, s) : Rational(0);
    switch (d.kind) {
      case DistKind::Bernoulli:
        out = {{shift, 1 - a[0]}, {shift + 1, a[0]}};
        break;
      case DistKind::Categorical:
        for (std::size_t i = 0; i < a.size(); ++i) out.emplace_back(shift + static_cast<long>(i), a[i]);
        break;
      case DistKind::DiscreteUniform: {
        long lo = a[0].get_num().get_si(), hi = a[1].get_num().get_si();
        for (long v = lo; v <= hi; ++v) out.emplace_back(shift + v, Rational(1, hi - lo + 1));
        break;
      }
      default:
        throw std::logic_error("continuous distribution in the enumerator");
    }
    return out;
  }

  Rational eval(const Expr& e, const State& s) const {
    switch (e.kind) {
      case Expr::Kind::Number: return e.value;
      case Expr::Kind::Var: {
        auto it = slot_.find(e.name);
        return it != slot_.end() ? s[it->second] : bind_.at(e.name);
      }
      case Expr::Kind::Add: return eval(*e.lhs, s) + eval(*e.rhs, s);
      case Expr::Kind::Sub: return eval(*e.lhs, s) - eval(*e.rhs, s);
      case Expr::Kind::Mul: return eval(*e.lhs, s) * eval(*e.rhs, s);
      case Expr::Kind::Div: return eval(*e.lhs, s) / eval(*e.rhs, s);
      case Expr::Kind::Neg: return -eval(*e.lhs, s);
      case Expr::Kind::Pow: return pow(eval(*e.lhs, s), e.exponent);
    }
    return 0;
  }

  bool test(const BoolExpr& b, const State& s) const {
    switch (b.kind) {
      case BoolExpr::Kind::True: return true;
      case BoolExpr::Kind::False: return false;
      case BoolExpr::Kind::Not: return !test(*b.left, s);
      case BoolExpr::Kind::And: return test(*b.left, s) && test(*b.right, s);
      case BoolExpr::Kind::Or: return test(*b.left, s) || test(*b.right, s);
      case BoolExpr::Kind::Cmp: break;
    }
    Rational l = eval(*b.lhs, s), r = eval(*b.rhs, s);
    switch (b.op) {
      case BoolExpr::Op::Eq: return l == r;
      case BoolExpr::Op::Ne: return l != r;
      case BoolExpr::Op::Lt: return l < r;
      case BoolExpr::Op::Le: return l <= r;
      case BoolExpr::Op::Gt: return l > r;
      case BoolExpr::Op::Ge: return l >= r;
    }
    return false;
  }

  const Ast& ast_;
  Bindings bind_;
  std::map<std::string, std::size_t> slot_;
};

}  // namespace loopm::testing
