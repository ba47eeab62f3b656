#include <doctest.h>

#include "enumerate.hpp"
#include "helpers.hpp"
#include "loopm/errors.hpp"
#include "properties.hpp"

using namespace loopm;
using loopm::testing::load;
using loopm::testing::poly_of;

TEST_CASE("indicator polynomials over finite supports") {
  Ast a = load("walk2d");
  auto c = check_restrictions(a);
  FiniteSupports fs(c.finite.begin(), c.finite.end());
  const Statement* cond = nullptr;
  for_each_statement(a.body, [&](const Statement& s) {
    if (s.kind == Statement::Kind::If) cond = &s;
  });
  REQUIRE(cond);
  CHECK(iverson_poly(*cond->cond, a, fs) == poly_of("1 - dimension", {"dimension"}));
  Ast f = parse("z = 1\nwhile true:\n  z = -z\n  if z == 1:\n    w = 1\n  end\nend\n");
  auto cf = check_restrictions(f);
  FiniteSupports ffs(cf.finite.begin(), cf.finite.end());
  CHECK(iverson_poly(*f.body[1].cond, f, ffs) == poly_of("z/2 + 1/2", {"z"}));
}

TEST_CASE("indicator of a condition over an unbounded variable") {
  Ast a = parse("x = 0\nwhile true:\n  x = x + 1\n  if x > 2:\n    y = 1\n  end\nend\n");
  try {
    iverson_poly(*a.body[1].cond, a, {});
    FAIL("expected NotFinite");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == ErrorKind::NotFinite);
    CHECK(e.restriction() == "R2");
  }
}

TEST_CASE("one-step expectations of the random walk") {
  MomentTransformer t(load("random_walk"));
  CHECK(t.step(Monomial::var("x")) == poly_of("x + 1/2", {"x"}));
  CHECK(t.step(Monomial::var("x", 2)) == poly_of("x**2 + x + 5/2", {"x"}));
  CHECK(t.step(Monomial::var("x") * Monomial::var("y")) == poly_of("x*y - x/2 + y/2 - 1/4", {"x", "y"}));
}

TEST_CASE("finite variables get power reduction") {
  MomentTransformer t(load("geometric"));
  CHECK(t.reduce(poly_of("stop**3", {"stop"})) == poly_of("stop", {"stop"}));
}

TEST_CASE("recurrence system of the fibonacci loop") {
  RecurrenceSystem sys = extract_recurrences(load("fibonacci"), {Monomial::var("a")});
  CHECK(sys.size() == 3);
  auto it = sys.iterate(10);
  CHECK(it[10][sys.index_of({Monomial::var("a"), false})] == RatFunc(55));
  CHECK_THROWS_AS(sys.index_of({Monomial::var("q"), false}), AnalysisError);
  CHECK(sys.dump().find("E(a)' = ") != std::string::npos);
}

TEST_CASE("matrix iterates equal exact enumeration") {
  for (const char* name : {"random_walk", "geometric", "poly_growth"}) {
    CAPTURE(name);
    Ast a = load(name);
    std::vector<Monomial> goals;
    for (const auto& v : a.variables) goals.push_back(Monomial::var(v, 2));
    RecurrenceSystem sys = extract_recurrences(a, goals);
    auto it = sys.iterate(7);
    loopm::testing::Enumerator en(a, {});
    for (std::size_t i = 0; i < sys.size(); ++i) {
      auto exact = en.moments(sys.state[i].monomial, 7);
      for (unsigned n = 0; n <= 7; ++n) CHECK(it[n][i] == RatFunc(exact[n]));
    }
  }
}

TEST_CASE("defective goals are rejected with R3") {
  Ast a = load("squares_coupled");
  try {
    extract_recurrences(a, {Monomial::var("x")});
    FAIL("expected DefectiveDependency");
  } catch (const AnalysisError& e) {
    CHECK(e.kind() == ErrorKind::DefectiveDependency);
    CHECK(e.restriction() == "R3");
    CHECK(e.diagnostic().find("(R3)") != std::string::npos);
  }
  CHECK(extract_recurrences(a, {Monomial::var("z")}).size() == 2);
}

TEST_CASE("initial values are symbolic in parameters") {
  MomentTransformer t(load("squares_coupled"));
  CHECK(t.initial(poly_of("x + y", {"x", "y"})) == RatFunc::param("x0") + RatFunc::param("y0"));
}

TEST_CASE("property: closed forms satisfy the moment semantics") {
  auto r = loopm::testing::recurrence_satisfaction();
  INFO(r.detail);
  CHECK(r.ok);
  CHECK(r.checks > 100);
}
