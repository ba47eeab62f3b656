#include "loopm/moments.hpp"

#include <cctype>

#include "loopm/errors.hpp"

namespace loopm {

namespace {

[[noreturn]] void bad_goal(const std::string& text, const std::string& why) {
  throw AnalysisError(ErrorKind::InvalidArgument, "moments", "goal '" + text + "': " + why);
}

Monomial parse_monomial(const std::string& text, const std::string& goal) {
  std::vector<Monomial::Factor> factors;
  std::size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  while (true) {
    skip();
    std::size_t start = i;
    while (i < text.size() && (std::isalnum(static_cast<unsigned char>(text[i])) || text[i] == '_')) ++i;
    if (start == i || std::isdigit(static_cast<unsigned char>(text[start]))) bad_goal(goal, "expected a variable");
    std::string name = text.substr(start, i - start);
    unsigned e = 1;
    skip();
    if (text.compare(i, 2, "**") == 0 || text.compare(i, 1, "^") == 0) {
      i += text[i] == '^' ? 1 : 2;
      skip();
      std::size_t ds = i;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) ++i;
      if (ds == i) bad_goal(goal, "expected an exponent");
      e = static_cast<unsigned>(std::stoul(text.substr(ds, i - ds)));
      if (e == 0) bad_goal(goal, "zero exponent");
    }
    factors.emplace_back(name, e);
    skip();
    if (i == text.size()) break;
    if (text[i] != '*') bad_goal(goal, "unexpected '" + std::string(1, text[i]) + "'");
    ++i;
  }
  return Monomial::from_factors(std::move(factors));
}

Rational factorial(unsigned k) {
  Rational out = 1;
  for (unsigned i = 2; i <= k; ++i) out *= i;
  return out;
}

/// (k-1)!! for even k.
Rational double_factorial_odd(unsigned k) {
  Rational out = 1;
  for (unsigned i = 1; i < k; i += 2) out *= i;
  return out;
}

Rational binomial(unsigned n, unsigned k) {
  Rational out = 1;
  for (unsigned i = 0; i < k; ++i) out = out * (n - i) / (i + 1);
  return out;
}

}  // namespace

MomentGoal MomentGoal::parse(const std::string& raw_text) {
  std::string text;
  for (char ch : raw_text)
    if (!std::isspace(static_cast<unsigned char>(ch))) text += ch;
  auto open = text.find('(');
  if (open == std::string::npos || text.back() != ')') bad_goal(raw_text, "expected E(...), cd(...) or kd(...)");
  std::string head = text.substr(0, open);
  MomentGoal g;
  g.monomial = parse_monomial(text.substr(open + 1, text.size() - open - 2), raw_text);
  if (g.monomial.is_one()) bad_goal(raw_text, "empty monomial");
  if (head == "E") return g;
  if (head == "V") {
    g.kind = Kind::Central;
    g.d = 2;
    return g;
  }
  if (head.size() >= 2 && (head[0] == 'c' || head[0] == 'k') &&
      std::all_of(head.begin() + 1, head.end(), [](char ch) { return std::isdigit(static_cast<unsigned char>(ch)); })) {
    g.kind = head[0] == 'c' ? Kind::Central : Kind::Cumulant;
    g.d = static_cast<unsigned>(std::stoul(head.substr(1)));
    if (g.d == 0) bad_goal(raw_text, "degree must be at least 1");
    return g;
  }
  bad_goal(raw_text, "unknown moment kind '" + head + "'");
}

std::string MomentGoal::str() const {
  switch (kind) {
    case Kind::Raw:
      return moment_symbol(monomial);
    case Kind::Central:
      return "c" + std::to_string(d) + "(" + monomial.str() + ")";
    case Kind::Cumulant:
      return "k" + std::to_string(d) + "(" + monomial.str() + ")";
  }
  return "";
}

std::vector<Monomial> MomentGoal::raw_monomials() const {
  if (kind == Kind::Raw) return {monomial};
  std::vector<Monomial> out;
  Monomial m;
  for (unsigned j = 1; j <= d; ++j) {
    m = m * monomial;
    out.push_back(m);
  }
  return out;
}

std::string moment_symbol(const Monomial& m) { return "E(" + m.str() + ")"; }

Poly goal_polynomial(const MomentGoal& goal) {
  if (goal.kind == MomentGoal::Kind::Raw) return Poly::var(moment_symbol(goal.monomial));
  std::vector<Poly> raw{Poly(1)};
  for (const auto& m : goal.raw_monomials()) raw.push_back(Poly::var(moment_symbol(m)));
  return goal.kind == MomentGoal::Kind::Central ? central_from_raw(raw) : cumulant_from_raw(raw);
}

RatFunc raw_moment(DistKind kind, const std::vector<RatFunc>& args, unsigned k) {
  if (k == 0) return RatFunc(1);
  switch (kind) {
    case DistKind::Bernoulli:
      return args[0];
    case DistKind::Categorical: {
      RatFunc out;
      for (std::size_t i = 1; i < args.size(); ++i) out += args[i] * RatFunc(pow(Rational(static_cast<long>(i)), k));
      return out;
    }
    case DistKind::Uniform: {
      // (b^{k+1} - a^{k+1}) / ((k+1)(b-a)) expanded so that a == b is harmless.
      RatFunc out;
      for (unsigned j = 0; j <= k; ++j) out += args[0].pow(j) * args[1].pow(k - j);
      return out / RatFunc(Rational(k + 1));
    }
    case DistKind::DiscreteUniform: {
      auto a = args[0].as_rational(), b = args[1].as_rational();
      if (!a || !b || !is_integer(*a) || !is_integer(*b) || *b < *a)
        throw AnalysisError(ErrorKind::UnsupportedMoment, "moments",
                            "DiscreteUniform needs integer literal bounds with a <= b");
      Rational sum = 0;
      for (Integer i = a->get_num(); i <= b->get_num(); ++i) sum += pow(Rational(i), k);
      return RatFunc(sum / (*b - *a + 1));
    }
    case DistKind::Normal: {
      // Second argument is the variance.
      RatFunc mu = args[0], var = args[1], out;
      for (unsigned j = 0; j <= k; j += 2)
        out += RatFunc(binomial(k, j) * double_factorial_odd(j)) * var.pow(j / 2) * mu.pow(k - j);
      return out;
    }
    case DistKind::Laplace: {
      RatFunc mu = args[0], b = args[1], out;
      for (unsigned j = 0; j <= k; j += 2) out += RatFunc(binomial(k, j) * factorial(j)) * b.pow(j) * mu.pow(k - j);
      return out;
    }
    case DistKind::Exponential:
      return RatFunc(factorial(k)) / args[0].pow(k);
    case DistKind::Gamma: {
      // Shape alpha, scale beta.
      RatFunc out = args[1].pow(k);
      for (unsigned i = 0; i < k; ++i) out *= args[0] + RatFunc(Rational(i));
      return out;
    }
    case DistKind::Beta: {
      RatFunc out(1);
      for (unsigned i = 0; i < k; ++i) out *= (args[0] + RatFunc(Rational(i))) / (args[0] + args[1] + RatFunc(Rational(i)));
      return out;
    }
    case DistKind::TruncNormal:
      throw AnalysisError(ErrorKind::UnsupportedMoment, "moments",
                          "TruncNormal moments involve the error function and are not exact rationals");
  }
  return RatFunc();
}

RatFunc raw_moment(const Ast& ast, const DistributionDraw& draw, unsigned k) {
  std::vector<RatFunc> args;
  for (const auto& a : draw.args) args.push_back(ast.constant(*a, to_string(draw.kind) + " parameter"));
  return raw_moment(draw.kind, args, k);
}

}  // namespace loopm
