#include <doctest.h>

#include "enumerate.hpp"
#include "helpers.hpp"
#include "loopm/errors.hpp"
#include "loopm/sensitivity.hpp"
#include "properties.hpp"

using namespace loopm;
using loopm::testing::goal_form;
using loopm::testing::load;
using loopm::testing::poly_form;
using loopm::testing::value_at;

namespace {

ExpPoly sens(const Ast& a, const std::string& goal, const std::string& param = "p") {
  return solve_sensitivity(a, {MomentGoal::parse(goal), param});
}

/// Formula part agrees exactly; values agree from n = `from` on.
void check_matches(const ExpPoly& got, const ExpPoly& expect, unsigned from = 0) {
  CAPTURE(got.str());
  CHECK((got - expect).terms().empty());
  for (unsigned n = from; n <= 10; ++n) CHECK(value_at(got, n) == value_at(expect, n));
}

}  // namespace

TEST_CASE("sensitivity of a solvable loop") {
  Ast a = load("normal_drift");
  check_matches(sens(a, "E(y)"), poly_form("(-16*n**3*p - 150*n**2*p + 30*n**2 - 134*n*p + 30*n)/225"));
  // d/dp E(x) = n (7/10 - 3/10).
  check_matches(sens(a, "E(x)"), poly_form("2*n/5"));
}

TEST_CASE("sensitivity of variances in the two dimensional walk") {
  Ast a = load("walk2d");
  check_matches(sens(a, "V(x)"), poly_form("-2*n"));
  check_matches(sens(a, "V(y)"), poly_form("2*n"));
  check_matches(sens(a, "E(x)"), ExpPoly(0));
  check_matches(sens(a, "E(x**2)"), poly_form("-2*n"));
}

TEST_CASE("sensitivity through an unsolvable loop") {
  Ast a = load("nonlinear_cycle");
  CHECK_THROWS_AS(goal_form(a, "E(u)"), AnalysisError);
  try {
    goal_form(a, "E(u)");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == ErrorKind::DefectiveDependency);
  }
  ExpPoly du = sens(a, "E(u)");
  // u starts at 0 for every p, so the formula holds from n = 1.
  check_matches(du, poly_form("-5*n**2*p**3 - 15/4*n**2*p**2 - 5*n*p**3 - 15/4*n*p**2 - 40*n*p + 3"), 1);
  CHECK(value_at(du, 0) == RatFunc(0));
  // Against exact central differences of enumerated moments.
  for (Rational p0 : {Rational(1, 3), Rational(2)}) {
    Rational h(1, 100000);
    auto m = [&](const Rational& p) { return testing::Enumerator(a, {{"p", p}}).moments(Monomial::var("u"), 4); };
    auto hi = m(p0 + h), lo = m(p0 - h);
    for (unsigned n = 1; n <= 4; ++n) {
      double fd = Rational((hi[n] - lo[n]) / (2 * h)).get_d();
      double exact = testing::ev(du, n, {{"p", p0}}).as_rational()->get_d();
      CHECK(fd == doctest::Approx(exact).epsilon(1e-6));
    }
  }
}

TEST_CASE("sensitivity of defective moments that need the defective part") {
  Ast a = load("nonlinear_cycle");
  CHECK(sens(a, "E(x)").is_zero());
  CHECK_THROWS_AS(sens(a, "E(x*y)"), AnalysisError);
  try {
    sens(a, "E(x*y)");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == ErrorKind::DefectiveDependency);
    CHECK(e.module() == "sensitivity");
  }
  // Defective but parameter independent: zero.
  CHECK(sens(a, "E(x*w)").is_zero());
}

TEST_CASE("parameter independent variables") {
  CHECK(param_independent_vars(load("nonlinear_cycle"), "p") == std::set<std::string>{"w", "x"});
  CHECK(param_independent_vars(load("normal_drift"), "p").empty());
  CHECK(param_independent_vars(load("walk2d"), "p") == std::set<std::string>{"noise"});
  // Control dependence: y only changes under a condition on x.
  Ast c = parse("x, y = 0, 0\nwhile true:\n  x = Bernoulli(q)\n  if x == 1:\n    y = y + 1\n  end\nend\n");
  CHECK(param_independent_vars(c, "q").empty());
  // Guards count as control dependence.
  Ast g = parse("x, y = 0, 0\nwhile x < 1:\n  x = Bernoulli(q)\n  y = y + 1\nend\n");
  CHECK(param_independent_vars(g, "q").empty());
}

TEST_CASE("sensitivity of independent variables is zero") {
  Ast a = load("walk2d");
  CHECK(sens(a, "E(noise**2)").is_zero());
  CHECK(sens(load("gaussian_square"), "E(x)", "p").is_zero());
}

TEST_CASE("consistency: differentiating the closed form") {
  struct Case {
    const char* program;
    const char* goal;
  };
  for (auto c : {Case{"normal_drift", "E(y)"}, Case{"normal_drift", "E(x**2)"},
                 Case{"walk2d", "E(y**2)"}, Case{"walk2d", "c2(y)"}}) {
    CAPTURE(c.program);
    CAPTURE(c.goal);
    Ast a = load(c.program);
    ExpPoly direct = diff_closed_form(goal_form(a, c.goal), "p");
    check_matches(sens(a, c.goal), direct);
    // The joint recurrence path gives the same function.
    MomentGoal goal = MomentGoal::parse(c.goal);
    if (goal.kind == MomentGoal::Kind::Raw) {
      MomentTransformer t(a);
      RecurrenceSystem sys = sensitivity_system(t, {goal.monomial}, "p", true);
      std::size_t i = sys.index_of({goal.monomial, true});
      auto it = sys.iterate(6);
      for (unsigned n = 0; n <= 6; ++n) CHECK(it[n][i] == value_at(direct, n));
    }
  }
}

TEST_CASE("diff of closed forms") {
  ExpPoly f = ExpPoly::term(BaseValue(Rational(2)), testing::poly_of("p**2*n + p", {"n"}));
  ExpPoly d = diff_closed_form(f, "p");
  CHECK(d == ExpPoly::term(BaseValue(Rational(2)), testing::poly_of("2*p*n + 1", {"n"})));
  CHECK(diff_closed_form(f, "q").is_zero());
}

TEST_CASE("property: finite difference convergence") {
  auto r = testing::finite_difference_sensitivity();
  INFO(r.detail);
  CHECK(r.ok);
  CHECK(r.checks > 20);
}
