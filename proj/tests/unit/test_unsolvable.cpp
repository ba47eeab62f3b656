#include <doctest.h>

#include <cmath>

#include "enumerate.hpp"
#include "helpers.hpp"
#include "loopm/errors.hpp"
#include "loopm/simulator.hpp"
#include "loopm/unsolvable.hpp"
#include "properties.hpp"

using namespace loopm;
using loopm::testing::goal_form;
using loopm::testing::load;
using loopm::testing::poly_of;
using loopm::testing::value_at;

namespace {

/// E(S') computed monomial by monomial through the moment transformer.
Poly pushed(const Ast& a, const Poly& S) {
  MomentTransformer t(a);
  Poly out;
  for (const auto& [m, c] : S.terms()) out += t.step(m).scaled(c);
  return out;
}

void check_identity(const Ast& a, const CombinationCandidate& c) {
  CAPTURE(c.str());
  CHECK(pushed(a, c.S) == c.S.scaled(c.lambda.as_ratfunc()) + c.inhomogeneous);
}

}  // namespace

TEST_CASE("defective variables") {
  CHECK(find_defective(load("squares_coupled")) == std::set<std::string>{"x", "y"});
  CHECK(find_defective(load("nonlinear_cycle")) == std::set<std::string>{"u", "w", "x"});
  CHECK(find_defective(load("fibonacci")).empty());
}

TEST_CASE("degree one combination of the unsolvable loop") {
  Ast a = load("squares_coupled");
  auto r = synthesize_combinations(a, 1);
  REQUIRE(r.candidates.size() == 1);
  const auto& c = r.candidates[0];
  CHECK(c.S == poly_of("x + y", {"x", "y"}));
  CHECK(c.lambda == BaseValue(Rational(2)));
  CHECK(c.inhomogeneous == poly_of("3 - 3*z", {"z"}));
  CHECK(c.str() == "E(x + y) satisfies s' = 2*s - 3*z + 3");
  check_identity(a, c);
}

TEST_CASE("synthesized loop reparses and solves") {
  Ast a = load("squares_coupled");
  auto c = synthesize_combinations(a, 1).candidates.at(0);
  Ast loop = synth_solvable_loop(a, c);
  CHECK(combination_variable(a) == "s");
  CHECK(parse(print_program(loop)) == loop);
  CHECK(check_restrictions(loop).defective.empty());
  ExpPoly es = solve_combination(a, c);
  ExpPoly expect = ExpPoly::term(BaseValue(Rational(2)), poly_of("x0 + y0 + 2", {}));
  expect -= ExpPoly::term(BaseValue(Rational(-1)), poly_of("1/2", {}));
  expect -= ExpPoly(RatFunc(Rational(3, 2)));
  CHECK((es - expect).is_zero());
  CHECK(es == goal_form(loop, "E(s)"));
}

TEST_CASE("fresh variable avoids existing names") {
  Ast a = parse("s, x, y = 0, 1, 1\nwhile true:\n  x = x + y**2\n  y = x*y\n  s = s + 1\nend\n");
  CHECK(combination_variable(a) == "s1");
}

TEST_CASE("simulation transfer: combination closed form matches runs of the original loop") {
  Ast a = load("squares_coupled");
  auto c = synthesize_combinations(a, 1).candidates.at(0);
  ExpPoly es = solve_combination(a, c);
  for (auto [x0, y0] : {std::pair<long, long>{0, 0}, {1, -1}, {3, 2}}) {
    SimulationOptions opt;
    opt.iterations = 6;
    opt.samples = 4;
    opt.bindings = {{"x0", Rational(x0)}, {"y0", Rational(y0)}};
    auto traces = run_samples(a, opt);
    for (unsigned n = 0; n <= 6; ++n) {
      double sim = traces[0].value(n, "x") + traces[0].value(n, "y");
      double exact = testing::ev(es, n, opt.bindings).as_rational()->get_d();
      CHECK(sim == doctest::Approx(exact));
    }
  }
}

TEST_CASE("probabilistic variant") {
  Ast a = parse("x, y, z = 0, y0, 0\nwhile true:\n  z = Bernoulli(1/2)\n  x = 2*x + y**2 + z\n  y = 2*y - y**2 + 2*z\nend\n");
  auto r = synthesize_combinations(a, 1);
  REQUIRE(r.candidates.size() == 1);
  const auto& c = r.candidates[0];
  CHECK(c.S == poly_of("x + y", {"x", "y"}));
  check_identity(a, c);
  ExpPoly es = solve_combination(a, c);
  // Exact distribution of the original loop.
  auto exact = testing::Enumerator(a, {{"y0", Rational(1)}}).moments(Monomial::var("x"), 6);
  auto ey = testing::Enumerator(a, {{"y0", Rational(1)}}).moments(Monomial::var("y"), 6);
  for (unsigned n = 0; n <= 6; ++n) CHECK(testing::ev(es, n, {{"y0", Rational(1)}}) == RatFunc(exact[n] + ey[n]));
  // And against simulation; y grows doubly exponentially on rare paths, so
  // the sample variance is only trustworthy for a few iterations.
  SimulationOptions opt;
  opt.iterations = 5;
  opt.samples = 20000;
  opt.seed = 3;
  opt.bindings = {{"y0", Rational(1)}};
  auto traces = run_samples(a, opt);
  double sum = 0, sq = 0;
  for (const auto& t : traces) {
    double v = t.value(5, "x") + t.value(5, "y");
    sum += v;
    sq += v * v;
  }
  double mean = sum / traces.size();
  double se = std::sqrt((sq / traces.size() - mean * mean) / traces.size());
  double closed = testing::ev(es, 5, opt.bindings).as_rational()->get_d();
  CHECK(std::abs(mean - closed) < 4 * se);
}

TEST_CASE("invariant transfer") {
  Ast a = load("squares_coupled");
  auto c = synthesize_combinations(a, 1).candidates.at(0);
  Ast loop = synth_solvable_loop(a, c);
  std::vector<std::pair<std::string, ExpPoly>> forms = {{"E(s)", goal_form(loop, "E(s)")},
                                                        {"E(z)", goal_form(loop, "E(z)")}};
  InvariantBasis b = invariant_basis(forms);
  REQUIRE_FALSE(b.generators.empty());
  // Generators hold for E(x + y) and E(z) of the original loop.
  Bindings init = {{"x0", Rational(1)}, {"y0", Rational(2)}};
  auto ex = testing::Enumerator(a, init).moments(Monomial::var("x"), 6);
  auto ey = testing::Enumerator(a, init).moments(Monomial::var("y"), 6);
  auto ez = testing::Enumerator(a, init).moments(Monomial::var("z"), 6);
  for (const auto& g : b.generators) {
    CAPTURE(g.str());
    for (unsigned n = 0; n <= 6; ++n) {
      std::map<std::string, Poly> sub = {{"E(s)", Poly(RatFunc(ex[n] + ey[n]))}, {"E(z)", Poly(RatFunc(ez[n]))}};
      Poly v = g.substitute(sub);
      CHECK(testing::ev(ExpPoly(v), 0, init).is_zero());
    }
  }
}

TEST_CASE("zero eigenvalues are skipped") {
  auto r = synthesize_combinations(load("nonlinear_cycle"), 1);
  CHECK(r.candidates.empty());
  CHECK_FALSE(r.notes.empty());
}

TEST_CASE("loops without defective variables are rejected") {
  try {
    synthesize_combinations(load("fibonacci"), 1);
    FAIL("expected NotUnsolvable");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == ErrorKind::NotUnsolvable);
    CHECK(e.module() == "unsolvable");
  }
  CHECK_THROWS_AS(synthesize_combinations(load("squares_coupled"), 0), AnalysisError);
}

TEST_CASE("property: every degree two candidate satisfies its recurrence") {
  for (const char* name : {"squares_coupled", "nonlinear_cycle"}) {
    Ast a = load(name);
    auto r = synthesize_combinations(a, 2);
    for (const auto& c : r.candidates) {
      check_identity(a, c);
      Ast loop = synth_solvable_loop(a, c);
      CHECK(parse(print_program(loop)) == loop);
    }
  }
}
