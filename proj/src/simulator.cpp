#include "loopm/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <ostream>
#include <random>
#include <thread>

#include "loopm/errors.hpp"

namespace loopm {

namespace {

std::uint64_t mix(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Everything resolved once: variable slots, statement ids, bound constants.
class Interpreter {
 public:
  Interpreter(const Ast& ast, const Bindings& bindings) : bindings_(bindings) {
    for (const auto& p : ast.params) {
      auto it = bindings.find(p);
      if (it == bindings.end())
        throw AnalysisError(ErrorKind::UnboundParameter, "simulator", "parameter '" + p + "' has no binding");
      params_[p] = it->second.get_d();
    }
    for (std::size_t i = 0; i < ast.variables.size(); ++i) slot_[ast.variables[i]] = i;
    std::size_t id = 0;
    for_each_statement(ast.init, [&](const Statement& s) { ids_[&s] = id++; });
    for_each_statement(ast.body, [&](const Statement& s) { ids_[&s] = id++; });
    for_each_statement(ast.init, [&](const Statement& s) { resolve_probs(s); });
    for_each_statement(ast.body, [&](const Statement& s) { resolve_probs(s); });
  }

  std::size_t size() const { return slot_.size(); }

  void run(std::vector<double>& state, const Block& block, std::uint64_t seed, std::uint64_t sample,
           std::uint64_t iteration) const {
    for (const auto& s : block) {
      if (s.kind == Statement::Kind::If) {
        run(state, test(*s.cond, state) ? s.then_body : s.else_body, seed, sample, iteration);
        continue;
      }
      std::vector<double> values;
      for (std::size_t t = 0; t < s.assign.targets.size(); ++t) {
        CounterRng rng(seed, sample, iteration, ids_.at(&s), t);
        values.push_back(sample_rhs(s.assign.rhs[t], state, rng));
      }
      for (std::size_t t = 0; t < values.size(); ++t) state[slot_.at(s.assign.targets[t])] = values[t];
    }
  }

  bool test(const BoolExpr& b, const std::vector<double>& st) const {
    switch (b.kind) {
      case BoolExpr::Kind::True: return true;
      case BoolExpr::Kind::False: return false;
      case BoolExpr::Kind::Not: return !test(*b.left, st);
      case BoolExpr::Kind::And: return test(*b.left, st) && test(*b.right, st);
      case BoolExpr::Kind::Or: return test(*b.left, st) || test(*b.right, st);
      case BoolExpr::Kind::Cmp: break;
    }
    double l = eval(*b.lhs, st), r = eval(*b.rhs, st);
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

 private:
  void resolve_probs(const Statement& s) {
    if (s.kind != Statement::Kind::Assign) return;
    for (const auto& rhs : s.assign.rhs)
      for (const auto& b : rhs.choices) probs_[&b] = b.prob.evaluate(bindings_).get_d();
  }

  double eval(const Expr& e, const std::vector<double>& st) const {
    switch (e.kind) {
      case Expr::Kind::Number: return e.value.get_d();
      case Expr::Kind::Var: {
        auto it = slot_.find(e.name);
        return it != slot_.end() ? st[it->second] : params_.at(e.name);
      }
      case Expr::Kind::Add: return eval(*e.lhs, st) + eval(*e.rhs, st);
      case Expr::Kind::Sub: return eval(*e.lhs, st) - eval(*e.rhs, st);
      case Expr::Kind::Mul: return eval(*e.lhs, st) * eval(*e.rhs, st);
      case Expr::Kind::Div: return eval(*e.lhs, st) / eval(*e.rhs, st);
      case Expr::Kind::Neg: return -eval(*e.lhs, st);
      case Expr::Kind::Pow: {
        double b = eval(*e.lhs, st), r = 1;
        for (unsigned i = 0; i < e.exponent; ++i) r *= b;
        return r;
      }
    }
    return 0;
  }

  double sample_rhs(const Rhs& rhs, const std::vector<double>& st, CounterRng& rng) const {
    if (!rhs.draw) {
      if (rhs.choices.size() == 1) return eval(*rhs.choices.front().value, st);
      double u = rng.uniform(), acc = 0;
      for (const auto& b : rhs.choices) {
        acc += probs_.at(&b);
        if (u < acc) return eval(*b.value, st);
      }
      return eval(*rhs.choices.back().value, st);
    }
    const auto& d = *rhs.draw;
    std::vector<double> a;
    for (const auto& x : d.args) a.push_back(eval(*x, st));
    double shift = d.shift ? eval(*d.shift, st) : 0.0;
    return shift + draw(d.kind, a, rng);
  }

  static double draw(DistKind kind, const std::vector<double>& a, CounterRng& rng) {
    switch (kind) {
      case DistKind::Bernoulli: return rng.uniform() < a[0] ? 1.0 : 0.0;
      case DistKind::Categorical: {
        double u = rng.uniform(), acc = 0;
        for (std::size_t i = 0; i < a.size(); ++i) {
          acc += a[i];
          if (u < acc) return static_cast<double>(i);
        }
        return static_cast<double>(a.size() - 1);
      }
      case DistKind::DiscreteUniform: {
        auto lo = static_cast<long>(std::llround(a[0])), hi = static_cast<long>(std::llround(a[1]));
        return static_cast<double>(std::uniform_int_distribution<long>(lo, hi)(rng));
      }
      case DistKind::Uniform: return a[0] + (a[1] - a[0]) * rng.uniform();
      case DistKind::Normal: return std::normal_distribution<double>(a[0], std::sqrt(a[1]))(rng);
      case DistKind::Laplace: {
        double u = rng.uniform() - 0.5;
        return a[0] - a[1] * std::copysign(1.0, u) * std::log1p(-2 * std::abs(u));
      }
      case DistKind::Exponential: return std::exponential_distribution<double>(a[0])(rng);
      case DistKind::Gamma: return std::gamma_distribution<double>(a[0], a[1])(rng);
      case DistKind::Beta: {
        double x = std::gamma_distribution<double>(a[0], 1.0)(rng);
        double y = std::gamma_distribution<double>(a[1], 1.0)(rng);
        return x / (x + y);
      }
      case DistKind::TruncNormal: {
        std::normal_distribution<double> n(a[0], std::sqrt(a[1]));
        for (int i = 0; i < 1000000; ++i) {
          double v = n(rng);
          if (v >= a[2] && v <= a[3]) return v;
        }
        return std::clamp(a[0], a[2], a[3]);
      }
    }
    return 0;
  }

  Bindings bindings_;
  std::map<std::string, double> params_;
  std::map<std::string, std::size_t> slot_;
  std::map<const Statement*, std::size_t> ids_;
  std::map<const Branch*, double> probs_;
};

/// Raw moments m_1..m_d of a sample.
std::vector<double> raw_moments(const std::vector<double>& xs, std::size_t begin, std::size_t end, unsigned d) {
  std::vector<double> m(d + 1, 0.0);
  m[0] = 1;
  for (std::size_t i = begin; i < end; ++i) {
    double p = 1;
    for (unsigned j = 1; j <= d; ++j) {
      p *= xs[i];
      m[j] += p;
    }
  }
  for (unsigned j = 1; j <= d; ++j) m[j] /= static_cast<double>(end - begin);
  return m;
}

double binom(unsigned n, unsigned k) {
  double r = 1;
  for (unsigned i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

double central(const std::vector<double>& m) {
  unsigned d = static_cast<unsigned>(m.size() - 1);
  double out = 0;
  for (unsigned j = 0; j <= d; ++j) out += binom(d, j) * m[j] * std::pow(-m[1], d - j);
  return out;
}

double cumulant(const std::vector<double>& m) {
  std::size_t d = m.size() - 1;
  std::vector<double> k(d + 1, 0.0);
  for (std::size_t n = 1; n <= d; ++n) {
    double acc = m[n];
    for (std::size_t j = 1; j < n; ++j)
      acc -= binom(static_cast<unsigned>(n - 1), static_cast<unsigned>(j - 1)) * k[j] * m[n - j];
    k[n] = acc;
  }
  return k[d];
}

double monomial_value(const Trace& t, std::size_t n, const Monomial& m) {
  double v = 1;
  for (const auto& [name, e] : m.factors()) v *= std::pow(t.value(n, name), e);
  return v;
}

}  // namespace

CounterRng::CounterRng(std::uint64_t seed, std::uint64_t sample, std::uint64_t iteration, std::uint64_t statement,
                       std::uint64_t target) {
  std::uint64_t h = mix(seed);
  h = mix(h ^ sample);
  h = mix(h ^ iteration);
  h = mix(h ^ statement);
  state_ = mix(h ^ target);
}

CounterRng::result_type CounterRng::operator()() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double CounterRng::uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

double Trace::value(std::size_t iteration, const std::string& var) const {
  auto it = std::find(vars.begin(), vars.end(), var);
  if (it == vars.end())
    throw AnalysisError(ErrorKind::InvalidArgument, "simulator", "'" + var + "' is not a program variable");
  return values.at(iteration)[static_cast<std::size_t>(it - vars.begin())];
}

std::vector<Trace> run_samples(const Ast& ast, const SimulationOptions& options) {
  Interpreter interp(ast, options.bindings);
  std::vector<Trace> traces(options.samples);
  auto one = [&](std::size_t s) {
    Trace& t = traces[s];
    t.seed = options.seed;
    t.sample = s;
    t.vars = ast.variables;
    std::vector<double> state(interp.size(), 0.0);
    interp.run(state, ast.init, options.seed, s, 0);
    t.values.reserve(options.iterations + 1);
    t.values.push_back(state);
    for (std::size_t i = 1; i <= options.iterations; ++i) {
      if (!ast.guard || interp.test(*ast.guard, state)) interp.run(state, ast.body, options.seed, s, i);
      t.values.push_back(state);
    }
  };
  unsigned threads = options.threads ? options.threads : std::max(1U, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, options.samples / 256)));
  if (threads <= 1) {
    for (std::size_t s = 0; s < options.samples; ++s) one(s);
    return traces;
  }
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < threads; ++w)
    pool.emplace_back([&, w] {
      for (std::size_t s = w; s < options.samples; s += threads) one(s);
    });
  for (auto& th : pool) th.join();
  return traces;
}

Estimate estimate_moment(const std::vector<Trace>& traces, const MomentGoal& goal, std::size_t n) {
  if (traces.empty()) return {};
  std::vector<double> xs;
  xs.reserve(traces.size());
  for (const auto& t : traces) xs.push_back(monomial_value(t, n, goal.monomial));
  auto stat = [&](std::size_t b, std::size_t e) {
    auto m = raw_moments(xs, b, e, goal.kind == MomentGoal::Kind::Raw ? 1 : goal.d);
    switch (goal.kind) {
      case MomentGoal::Kind::Raw: return m[1];
      case MomentGoal::Kind::Central: return central(m);
      case MomentGoal::Kind::Cumulant: return cumulant(m);
    }
    return 0.0;
  };
  Estimate out;
  out.value = stat(0, xs.size());
  double count = static_cast<double>(xs.size());
  if (goal.kind == MomentGoal::Kind::Raw) {
    double ss = 0;
    for (double x : xs) ss += (x - out.value) * (x - out.value);
    out.stderr_ = xs.size() > 1 ? std::sqrt(ss / (count - 1) / count) : 0.0;
    return out;
  }
  const std::size_t batches = std::min<std::size_t>(20, xs.size());
  if (batches < 2) return out;
  std::vector<double> est;
  std::size_t per = xs.size() / batches;
  for (std::size_t b = 0; b < batches; ++b) est.push_back(stat(b * per, (b + 1) * per));
  double mean = 0, ss = 0;
  for (double e : est) mean += e / static_cast<double>(batches);
  for (double e : est) ss += (e - mean) * (e - mean);
  out.stderr_ = std::sqrt(ss / static_cast<double>(batches - 1) / static_cast<double>(batches));
  return out;
}

void write_csv(const std::vector<Trace>& traces, std::ostream& out) {
  if (traces.empty()) return;
  out << "sample,iteration";
  for (const auto& v : traces.front().vars) out << "," << v;
  out << "\n";
  char buf[32];
  for (const auto& t : traces)
    for (std::size_t i = 0; i < t.values.size(); ++i) {
      out << t.sample << "," << i;
      for (double x : t.values[i]) {
        std::snprintf(buf, sizeof buf, "%.17g", x);
        out << "," << buf;
      }
      out << "\n";
    }
}

}  // namespace loopm
