#include <doctest.h>

#include "helpers.hpp"
#include "loopm/errors.hpp"
#include "properties.hpp"

using namespace loopm;
using loopm::testing::goal_form;
using loopm::testing::load;
using loopm::testing::poly_form;

TEST_CASE("random walk in two dimensions") {
  Ast a = load("walk2d");
  CHECK(goal_form(a, "E(x)").is_zero());
  CHECK(goal_form(a, "E(y)").is_zero());
  CHECK(goal_form(a, "E(x**2)") == poly_form("2*n*(1 - p)"));
  CHECK(goal_form(a, "E(y**2)") == poly_form("2*n*p"));
  CHECK(goal_form(a, "E(x**2)").str() == "2*n*(1 - p)");
}

TEST_CASE("gaussian loop moments") {
  Ast a = load("gaussian_square");
  CHECK(goal_form(a, "E(y)") == poly_form("-n/6"));
  CHECK(goal_form(a, "E(y**2)") == poly_form("(n**2 + 65*n)/36"));
  // E(x) against the iterated matrix.
  RecurrenceSystem sys = extract_recurrences(a, {Monomial::var("x")});
  auto it = sys.iterate(12);
  ExpPoly x = goal_form(a, "E(x)");
  for (unsigned n = 0; n <= 12; ++n) CHECK(x.value(n) == QuadExt(it[n][sys.index_of({Monomial::var("x"), false})]));
}

TEST_CASE("fibonacci closed form has surd bases") {
  ExpPoly a = goal_form(load("fibonacci"), "E(a)");
  CHECK(a.surds() == std::set<long>{5});
  Integer f0 = 0, f1 = 1;
  for (unsigned n = 0; n <= 25; ++n) {
    CHECK(a.value(n) == QuadExt(Rational(f0)));
    Integer f2 = f0 + f1;
    f0 = f1;
    f1 = f2;
  }
  CHECK(goal_form(load("fibonacci"), "E(z)").str() == "(-1)**n");
}

TEST_CASE("geometric stopping") {
  Ast a = load("geometric");
  ExpPoly count = goal_form(a, "E(count)");
  CHECK(count.str() == "2 - 2*(1/2)**n");
  Limit l = limit_at_infinity(count);
  CHECK(l.kind == Limit::Kind::Value);
  CHECK(l.value == RatFunc(2));
  CHECK(limit_at_infinity(goal_form(a, "E(x)")).kind == Limit::Kind::Diverges);
  CHECK(limit_at_infinity(goal_form(load("fibonacci"), "E(z)")).kind == Limit::Kind::NoLimit);
}

TEST_CASE("zero eigenvalues leave initial exceptions") {
  Ast a = parse("x, y = 5, 1\nwhile true:\n  x = 0\n  y = 2*y + x\nend\n");
  ExpPoly x = goal_form(a, "E(x)");
  CHECK(x.value(0) == QuadExt(5));
  CHECK(x.value(1) == QuadExt(0));
  ExpPoly y = goal_form(a, "E(y)");
  RecurrenceSystem sys = extract_recurrences(a, {Monomial::var("y")});
  auto it = sys.iterate(8);
  for (unsigned n = 0; n <= 8; ++n) CHECK(y.value(n) == QuadExt(it[n][sys.index_of({Monomial::var("y"), false})]));
}

TEST_CASE("parametric bases") {
  Ast a = parse("x = 1\nwhile true:\n  x = p*x\nend\n");
  ExpPoly x = goal_form(a, "E(x)");
  CHECK(x.str() == "p**n");
  CHECK_THROWS_AS(limit_at_infinity(x), AnalysisError);
  ExpPoly d = diff(x, "p");
  for (unsigned n = 0; n <= 5; ++n)
    CHECK(evaluate_at(d, n, {{"p", Rational(2)}}) == QuadExt(Rational(n) * pow(Rational(2), static_cast<long>(n) - 1)));
}

TEST_CASE("differentiation of closed forms") {
  CHECK(diff(poly_form("2*n*(1 - p)"), "p") == poly_form("-2*n"));
  CHECK(diff(poly_form("p**2*n"), "p") == poly_form("2*p*n"));
}

TEST_CASE("evaluation needs every parameter bound") {
  try {
    evaluate_at(poly_form("p*n"), 2, {});
    FAIL("expected UnboundParameter");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == ErrorKind::UnboundParameter);
  }
  CHECK(evaluate_at(poly_form("p*n"), 2, {{"p", Rational(1, 2)}}) == QuadExt(1));
}

TEST_CASE("property: closed forms fit random C-finite systems") {
  auto r = loopm::testing::initial_condition_fit();
  INFO(r.detail);
  CHECK(r.ok);
  CHECK(r.checks > 0);
}
