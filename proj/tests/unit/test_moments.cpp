#include <doctest.h>

#include "loopm/errors.hpp"
#include "loopm/moments.hpp"

using namespace loopm;

namespace {

RatFunc R(long n, long d = 1) { return RatFunc(Rational(n, d)); }

Rational fact(unsigned n) {
  Rational r = 1;
  for (unsigned i = 2; i <= n; ++i) r *= i;
  return r;
}

Rational binom(unsigned n, unsigned k) { return fact(n) / (fact(k) * fact(n - k)); }

}  // namespace

TEST_CASE("normal moments follow m_k = mu m_{k-1} + (k-1) s2 m_{k-2}") {
  RatFunc mu = RatFunc::param("m"), s2 = RatFunc::param("s");
  std::vector<RatFunc> m = {R(1), mu};
  for (unsigned k = 2; k <= 6; ++k) m.push_back(mu * m[k - 1] + R(k - 1) * s2 * m[k - 2]);
  for (unsigned k = 0; k <= 6; ++k) CHECK(raw_moment(DistKind::Normal, {mu, s2}, k) == m[k]);
}

TEST_CASE("uniform, bernoulli, exponential, gamma, beta") {
  for (unsigned k = 1; k <= 5; ++k) {
    Rational a = -1, b = 3;
    Rational u = (pow(b, k + 1) - pow(a, k + 1)) / ((k + 1) * (b - a));
    CHECK(raw_moment(DistKind::Uniform, {R(-1), R(3)}, k) == RatFunc(u));
    CHECK(raw_moment(DistKind::Bernoulli, {RatFunc::param("p")}, k) == RatFunc::param("p"));
    CHECK(raw_moment(DistKind::Exponential, {R(2)}, k) == RatFunc(fact(k) / pow(Rational(2), k)));
    Rational g = pow(Rational(1, 2), k);
    for (unsigned i = 0; i < k; ++i) g *= 3 + i;
    CHECK(raw_moment(DistKind::Gamma, {R(3), R(1, 2)}, k) == RatFunc(g));
    Rational be = 1;
    for (unsigned i = 0; i < k; ++i) be *= Rational(2 + i) / Rational(5 + i);
    CHECK(raw_moment(DistKind::Beta, {R(2), R(3)}, k) == RatFunc(be));
  }
}

TEST_CASE("laplace moments from the symmetric central moments") {
  Rational mu = 1, b = Rational(1, 2);
  for (unsigned k = 0; k <= 6; ++k) {
    Rational acc = 0;
    for (unsigned j = 0; j <= k; j += 2) acc += binom(k, j) * pow(mu, k - j) * fact(j) * pow(b, j);
    CHECK(raw_moment(DistKind::Laplace, {RatFunc(mu), RatFunc(b)}, k) == RatFunc(acc));
  }
}

TEST_CASE("finite distributions") {
  for (unsigned k = 1; k <= 4; ++k) {
    Rational c = Rational(1, 4) * 1 + Rational(1, 4) * pow(Rational(2), k);
    CHECK(raw_moment(DistKind::Categorical, {R(1, 2), R(1, 4), R(1, 4)}, k) == RatFunc(c));
    Rational d = 0;
    for (int i = 1; i <= 6; ++i) d += pow(Rational(i), k) / 6;
    CHECK(raw_moment(DistKind::DiscreteUniform, {R(1), R(6)}, k) == RatFunc(d));
  }
  CHECK_THROWS_AS(raw_moment(DistKind::DiscreteUniform, {RatFunc::param("a"), R(6)}, 2), AnalysisError);
}

TEST_CASE("truncated normal moments are not supported") {
  try {
    raw_moment(DistKind::TruncNormal, {R(0), R(1), R(-1), R(1)}, 2);
    FAIL("expected UnsupportedMoment");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == ErrorKind::UnsupportedMoment);
  }
}

TEST_CASE("central moments and cumulants of a normal") {
  RatFunc mu = RatFunc::param("m"), s2 = RatFunc::param("s");
  std::vector<RatFunc> raw;
  for (unsigned k = 0; k <= 4; ++k) raw.push_back(raw_moment(DistKind::Normal, {mu, s2}, k));
  auto upto = [&](std::size_t d) { return std::vector<RatFunc>(raw.begin(), raw.begin() + static_cast<long>(d) + 1); };
  CHECK(central_from_raw(upto(2)) == s2);
  CHECK(central_from_raw(upto(3)).is_zero());
  CHECK(central_from_raw(upto(4)) == R(3) * s2 * s2);
  CHECK(cumulant_from_raw(upto(1)) == mu);
  CHECK(cumulant_from_raw(upto(2)) == s2);
  CHECK(cumulant_from_raw(upto(3)).is_zero());
  CHECK(cumulant_from_raw(upto(4)).is_zero());
}

TEST_CASE("exponential cumulants are (n-1)!/rate^n") {
  std::vector<RatFunc> raw;
  for (unsigned k = 0; k <= 5; ++k) raw.push_back(raw_moment(DistKind::Exponential, {R(3)}, k));
  for (std::size_t d = 1; d <= 5; ++d) {
    std::vector<RatFunc> r(raw.begin(), raw.begin() + static_cast<long>(d) + 1);
    CHECK(cumulant_from_raw(r) == RatFunc(fact(static_cast<unsigned>(d - 1)) / pow(Rational(3), static_cast<long>(d))));
  }
}

TEST_CASE("goal parsing") {
  auto e = MomentGoal::parse("E(x**2)");
  CHECK(e.kind == MomentGoal::Kind::Raw);
  CHECK(e.monomial == Monomial::var("x", 2));
  CHECK(e.str() == "E(x**2)");
  CHECK(MomentGoal::parse("E(x^2)") == e);
  auto v = MomentGoal::parse("V(x)");
  CHECK(v.kind == MomentGoal::Kind::Central);
  CHECK(v.d == 2);
  CHECK(v.str() == "c2(x)");
  auto k = MomentGoal::parse("k3(x*y)");
  CHECK(k.kind == MomentGoal::Kind::Cumulant);
  CHECK(k.raw_monomials().size() == 3);
  CHECK(MomentGoal::parse("E(x*y)").str() == "E(x*y)");
  CHECK_THROWS_AS(MomentGoal::parse("F(x)"), AnalysisError);
  CHECK_THROWS_AS(MomentGoal::parse("E(x"), AnalysisError);
}

TEST_CASE("goal polynomials in moment symbols") {
  Poly v = goal_polynomial(MomentGoal::parse("V(x)"));
  Poly ex = Poly::var("E(x)"), ex2 = Poly::var("E(x**2)");
  CHECK(v == ex2 - ex * ex);
  CHECK(goal_polynomial(MomentGoal::parse("E(x*y)")) == Poly::var("E(x*y)"));
}
