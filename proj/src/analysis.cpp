#include <algorithm>
#include <functional>

#include "loopm/errors.hpp"
#include "loopm/frontend.hpp"

namespace loopm {

namespace {

constexpr int kMaxIterations = 64;
constexpr std::size_t kMaxValues = 256;
constexpr std::size_t kMaxValuations = 4096;

using Values = std::optional<std::set<Rational>>;

/// Calls f for every valuation of `vars` drawn from their supports. Returns
/// false when some variable is unbounded or the product is too large.
bool for_each_valuation(const std::vector<std::string>& vars, const SupportMap& supports,
                        const std::function<void(const std::map<std::string, Rational>&)>& f) {
  std::size_t total = 1;
  std::vector<std::vector<Rational>> domains;
  for (const auto& v : vars) {
    auto it = supports.find(v);
    if (it == supports.end() || !it->second) return false;
    domains.emplace_back(it->second->begin(), it->second->end());
    total *= std::max<std::size_t>(domains.back().size(), 1);
    if (total > kMaxValuations) return false;
    if (domains.back().empty()) return true;  // not yet reachable
  }
  std::vector<std::size_t> idx(vars.size(), 0);
  std::map<std::string, Rational> val;
  while (true) {
    for (std::size_t i = 0; i < vars.size(); ++i) val[vars[i]] = domains[i][idx[i]];
    f(val);
    std::size_t k = 0;
    while (k < vars.size() && ++idx[k] == domains[k].size()) idx[k++] = 0;
    if (k == vars.size()) return true;
  }
}

std::vector<std::string> ring_vars(const Poly& p) {
  auto vs = p.variables();
  return {vs.begin(), vs.end()};
}

Rational value_at(const Poly& p, const std::map<std::string, Rational>& val) {
  Rational out = 0;
  for (const auto& [m, c] : p.terms()) {
    Rational t = *c.as_rational();
    for (const auto& [v, e] : m.factors()) t *= pow(val.at(v), e);
    out += t;
  }
  return out;
}

/// Values a polynomial can take; nullopt when unbounded or parametric.
Values poly_values(const Poly& p, const SupportMap& supports) {
  if (!parameter_free(p)) return std::nullopt;
  std::set<Rational> out;
  bool ok = for_each_valuation(ring_vars(p), supports, [&](const auto& val) { out.insert(value_at(p, val)); });
  if (!ok) return std::nullopt;
  return out;
}

Values rhs_values(const Ast& ast, const Rhs& rhs, const SupportMap& supports) {
  if (rhs.draw) {
    const auto& d = *rhs.draw;
    switch (d.kind) {
      case DistKind::Bernoulli:
        return std::set<Rational>{0, 1};
      case DistKind::Categorical: {
        std::set<Rational> out;
        for (std::size_t k = 0; k < d.args.size(); ++k) out.insert(Rational(static_cast<long>(k)));
        return out;
      }
      case DistKind::DiscreteUniform: {
        Poly shift = d.shift ? ast.poly(*d.shift) : Poly();
        Poly lo = ast.poly(*d.args[0]) + shift, hi = ast.poly(*d.args[1]) + shift;
        if (!parameter_free(lo) || !parameter_free(hi)) return std::nullopt;
        auto vs = (lo + hi).variables();
        auto lv = lo.variables();
        vs.insert(lv.begin(), lv.end());
        std::set<Rational> out;
        bool too_many = false;
        bool ok = for_each_valuation({vs.begin(), vs.end()}, supports, [&](const auto& val) {
          Rational a = value_at(lo, val), b = value_at(hi, val);
          for (Integer k = a.get_num() / a.get_den(); k <= b; ++k) {
            if (k < a) continue;
            out.insert(Rational(k));
            if (out.size() > kMaxValues) {
              too_many = true;
              return;
            }
          }
        });
        if (!ok || too_many) return std::nullopt;
        return out;
      }
      default:
        return std::nullopt;
    }
  }
  std::set<Rational> out;
  for (const auto& b : rhs.choices) {
    auto vals = poly_values(ast.poly(*b.value), supports);
    if (!vals) return std::nullopt;
    out.insert(vals->begin(), vals->end());
  }
  return out;
}

void collect_assignments(const Block& block, std::vector<const Assignment*>& out) {
  for_each_statement(block, [&](const Statement& s) {
    if (s.kind == Statement::Kind::Assign) out.push_back(&s.assign);
  });
}

/// One flow-insensitive pass; returns true when something grew.
bool support_pass(const Ast& ast, const std::vector<const Assignment*>& assigns, SupportMap& supports,
                  bool widen) {
  bool changed = false;
  for (const auto* a : assigns) {
    for (std::size_t i = 0; i < a->targets.size(); ++i) {
      auto& slot = supports[a->targets[i]];
      if (!slot) continue;
      Values vals = rhs_values(ast, a->rhs[i], supports);
      if (!vals) {
        slot.reset();
        changed = true;
        continue;
      }
      std::size_t before = slot->size();
      slot->insert(vals->begin(), vals->end());
      if (slot->size() != before) {
        changed = true;
        if (widen || slot->size() > kMaxValues) slot.reset();
      }
    }
  }
  return changed;
}

void collect_conditions(const Block& block, std::vector<std::pair<const BoolExpr*, int>>& out) {
  for_each_statement(block, [&](const Statement& s) {
    if (s.kind == Statement::Kind::If) out.emplace_back(s.cond.get(), s.line);
  });
}

/// Polynomials an assignment target depends on: choice values, or draw
/// arguments plus the location shift.
std::vector<Poly> rhs_polys(const Ast& ast, const Rhs& rhs) {
  std::vector<Poly> out;
  if (rhs.draw) {
    for (const auto& a : rhs.draw->args) out.push_back(ast.poly(*a));
    if (rhs.draw->shift) out.push_back(ast.poly(*rhs.draw->shift));
  } else {
    for (const auto& b : rhs.choices) out.push_back(ast.poly(*b.value));
  }
  return out;
}

/// Tarjan's algorithm; components come out in reverse topological order.
std::vector<std::vector<std::string>> strongly_connected(const std::map<std::string, std::set<std::string>>& graph) {
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> comps;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : graph.at(v)) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      std::sort(comp.begin(), comp.end());
      comps.push_back(std::move(comp));
    }
  };
  for (const auto& [v, _] : graph)
    if (!index.count(v)) visit(v);
  return comps;
}

/// State part (terms mentioning program variables) and state-free part.
std::pair<Poly, Poly> split_state(const Poly& p) {
  Poly state, rest;
  for (const auto& [m, c] : p.terms()) (m.is_one() ? rest : state).add_term(m, c);
  return {state, rest};
}

Rhs normalize_rhs(const Ast& ast, const Rhs& rhs, int line) {
  if (!rhs.draw) return rhs;
  DistributionDraw d = *rhs.draw;
  auto fail = [&](std::size_t arg) {
    throw AnalysisError(ErrorKind::NormalizeError, "frontend",
                        "line " + std::to_string(line) + ": parameter " + std::to_string(arg + 1) + " of " +
                            to_string(d.kind) + " depends on program variables and is not a location",
                        "R1");
  };
  std::vector<std::size_t> location;
  switch (d.kind) {
    case DistKind::Normal:
    case DistKind::Laplace:
      location = {0};
      break;
    case DistKind::Uniform:
    case DistKind::DiscreteUniform:
      location = {0, 1};
      break;
    case DistKind::TruncNormal:
      location = {0, 2, 3};
      break;
    default:
      break;
  }
  std::optional<Poly> shift;
  std::vector<Poly> parts(d.args.size());
  for (std::size_t i = 0; i < d.args.size(); ++i) {
    auto [state, rest] = split_state(ast.poly(*d.args[i]));
    parts[i] = rest;
    bool is_loc = std::find(location.begin(), location.end(), i) != location.end();
    if (!is_loc) {
      if (!state.is_zero()) fail(i);
      continue;
    }
    if (!shift)
      shift = state;
    else if (!(*shift == state))
      fail(i);
  }
  if (!shift || shift->is_zero()) return rhs;
  for (auto i : location) d.args[i] = Expr::from_poly(parts[i]);
  Poly total = *shift;
  if (d.shift) total += ast.poly(*d.shift);
  d.shift = Expr::from_poly(total);
  Rhs out;
  out.draw = d;
  return out;
}

Block normalize_block(const Ast& ast, const Block& block) {
  Block out;
  for (const auto& s : block) {
    if (s.kind == Statement::Kind::If) {
      out.push_back(Statement::if_stmt(s.cond, normalize_block(ast, s.then_body), normalize_block(ast, s.else_body),
                                       s.line));
      continue;
    }
    Assignment a = s.assign;
    for (auto& r : a.rhs) r = normalize_rhs(ast, r, s.line);
    out.push_back(Statement::assignment(std::move(a), s.line));
  }
  return out;
}

}  // namespace

SupportMap analyze_supports(const Ast& ast) {
  SupportMap supports;
  for (const auto& v : ast.variables) supports[v] = std::set<Rational>{};
  // Variables first assigned in the body start from 0.
  std::set<std::string> init_assigned;
  for_each_statement(ast.init, [&](const Statement& s) {
    if (s.kind == Statement::Kind::Assign) init_assigned.insert(s.assign.targets.begin(), s.assign.targets.end());
  });
  for (const auto& v : ast.variables)
    if (!init_assigned.count(v)) supports[v]->insert(Rational(0));

  std::vector<const Assignment*> assigns;
  collect_assignments(ast.init, assigns);
  collect_assignments(ast.body, assigns);
  for (int it = 0; it < kMaxIterations; ++it)
    if (!support_pass(ast, assigns, supports, false)) return supports;
  // Still growing: anything that keeps changing is widened to unbounded.
  while (support_pass(ast, assigns, supports, true)) {
  }
  return supports;
}

std::set<std::string> defective_variables(const Ast& ast, const SupportMap& supports) {
  auto finite = [&](const std::string& v) {
    auto it = supports.find(v);
    return it != supports.end() && it->second.has_value();
  };
  std::map<std::string, std::set<std::string>> graph;
  std::map<std::string, std::vector<Poly>> updates;
  for (const auto& v : ast.variables)
    if (!finite(v)) graph[v];
  auto record = [&](const Block& block) {
    for_each_statement(block, [&](const Statement& s) {
      if (s.kind != Statement::Kind::Assign) return;
      for (std::size_t i = 0; i < s.assign.targets.size(); ++i) {
        const auto& t = s.assign.targets[i];
        if (finite(t)) continue;
        for (auto& p : rhs_polys(ast, s.assign.rhs[i])) {
          for (const auto& u : p.variables())
            if (!finite(u)) graph[t].insert(u);
          updates[t].push_back(std::move(p));
        }
      }
    });
  };
  record(ast.body);

  std::set<std::string> bad;
  for (const auto& comp : strongly_connected(graph)) {
    std::set<std::string> members(comp.begin(), comp.end());
    bool nonlinear = false;
    for (const auto& v : comp) {
      for (const auto& p : updates[v]) {
        for (const auto& [m, c] : p.terms()) {
          unsigned deg = 0;
          for (const auto& [u, e] : m.factors())
            if (members.count(u)) deg += e;
          if (deg >= 2) nonlinear = true;
        }
      }
    }
    if (nonlinear) bad.insert(comp.begin(), comp.end());
  }

  // Everything that reaches a bad component is defective too.
  std::set<std::string> defective;
  for (const auto& [v, _] : graph) {
    std::set<std::string> seen{v};
    std::vector<std::string> todo{v};
    bool hit = false;
    while (!todo.empty() && !hit) {
      std::string u = todo.back();
      todo.pop_back();
      if (bad.count(u)) hit = true;
      for (const auto& w : graph[u])
        if (seen.insert(w).second) todo.push_back(w);
    }
    if (hit) defective.insert(v);
  }
  return defective;
}

VarClassification check_restrictions(const Ast& ast) {
  try {
    normalize(ast);
  } catch (const AnalysisError& e) {
    if (e.kind() == ErrorKind::NormalizeError) throw AnalysisError(ErrorKind::R1Violation, "frontend", e.what(), "R1");
    throw;
  }
  SupportMap supports = analyze_supports(ast);
  VarClassification out;
  for (const auto& [v, s] : supports)
    if (s) out.finite[v] = *s;

  std::vector<std::pair<const BoolExpr*, int>> conds;
  if (ast.guard) conds.emplace_back(ast.guard.get(), 0);
  collect_conditions(ast.body, conds);
  for (const auto& [cond, line] : conds) {
    std::set<std::string> vars;
    cond->collect_vars(vars);
    for (const auto& v : vars) {
      if (ast.is_param(v) || out.finite.count(v)) continue;
      std::string where = line ? "condition at line " + std::to_string(line) : "loop guard";
      out.violations.push_back("R2: " + where + " reads variable '" + v + "' without finite support");
    }
  }

  out.defective = defective_variables(ast, supports);
  for (const auto& v : ast.variables)
    if (!out.defective.count(v)) out.effective.insert(v);
  if (!out.defective.empty()) {
    std::string names;
    for (const auto& v : out.defective) names += (names.empty() ? "" : ", ") + v;
    out.violations.push_back("R3: non-linear cyclic dependency through {" + names + "}");
  }
  return out;
}

Ast normalize(const Ast& ast) {
  Ast out = ast;
  out.init = normalize_block(ast, ast.init);
  out.body = normalize_block(ast, ast.body);
  if (ast.guard) {
    Block wrapped;
    wrapped.push_back(Statement::if_stmt(ast.guard, std::move(out.body), {}, 0));
    out.body = std::move(wrapped);
    out.guard = nullptr;
  }
  return out;
}

}  // namespace loopm
