#include <doctest.h>

#include "helpers.hpp"
#include "loopm/errors.hpp"

using namespace loopm;
using loopm::testing::load;

namespace {

ErrorKind kind_of(const std::string& src) {
  try {
    Ast a = parse(src);
    check_restrictions(a);
  } catch (const AnalysisError& e) {
    return e.kind();
  }
  return ErrorKind::InvalidArgument;
}

}  // namespace

TEST_CASE("corpus programs parse and print back to an equal program") {
  for (const char* name : {"walk2d", "fibonacci", "gaussian_square", "random_walk", "geometric",
                           "normal_drift", "nonlinear_cycle", "squares_coupled", "poly_growth"}) {
    CAPTURE(name);
    Ast a = load(name);
    std::string text = print_program(a);
    Ast b = parse(text);
    CHECK(a == b);
    CHECK(print_program(b) == text);
  }
}

TEST_CASE("parameters are identifiers that are never assigned") {
  Ast a = load("walk2d");
  CHECK(a.params == std::set<std::string>{"p"});
  CHECK(a.variables == std::vector<std::string>{"x", "y", "dimension", "noise"});
  Ast f6 = load("squares_coupled");
  CHECK(f6.params == std::set<std::string>{"x0", "y0"});
}

TEST_CASE("choices and implicit remainder probabilities") {
  Ast a = parse("x = 0\nwhile true:\n  x = x + 1 {1/3} x - 1\nend\n");
  const Rhs& r = a.body[0].assign.rhs[0];
  REQUIRE(r.choices.size() == 2);
  CHECK(r.choices[0].prob == RatFunc(Rational(1, 3)));
  CHECK(r.choices[1].prob == RatFunc(Rational(2, 3)));
  Ast dec = parse("x = 0\nwhile true:\n  x = 1 {0.7} 2\nend\n");
  CHECK(dec.body[0].assign.rhs[0].choices[0].prob == RatFunc(Rational(7, 10)));
}

TEST_CASE("syntax errors report line and column") {
  try {
    parse("x = 0\nwhile true:\n  x = x + \nend\n");
    FAIL("expected a syntax error");
  } catch (const SyntaxError& e) {
    CHECK(e.line() >= 3);
    CHECK(e.kind() == ErrorKind::SyntaxError);
  }
  CHECK(kind_of("x = 0\nwhile true:\n  x = x $ 1\nend\n") == ErrorKind::SyntaxError);
}

TEST_CASE("probabilities must form a distribution") {
  CHECK(kind_of("x = 0\nwhile true:\n  x = 1 {1/2} 2 {2/3} 3\nend\n") == ErrorKind::ProbabilityError);
  CHECK(kind_of("x = 0\nwhile true:\n  x = 1 {-1/2} 2\nend\n") == ErrorKind::ProbabilityError);
}

TEST_CASE("restriction R1: state-dependent non-location parameters") {
  CHECK(kind_of("x = 1\nwhile true:\n  x = Normal(0, x)\nend\n") == ErrorKind::R1Violation);
  // A state-dependent location is fine.
  CHECK_NOTHROW(check_restrictions(parse("x = 1\nwhile true:\n  x = Normal(x, 1)\nend\n")));
}

TEST_CASE("restriction R2: conditions over unbounded variables are reported") {
  auto c = check_restrictions(parse("x = 0\nwhile x < 10:\n  x = x + 1\nend\n"));
  CHECK_FALSE(c.violations.empty());
  auto ok = check_restrictions(load("geometric"));
  CHECK(ok.violations.empty());
  CHECK(ok.finite.at("stop") == std::set<Rational>{0, 1});
}

TEST_CASE("finite supports") {
  auto c = check_restrictions(load("walk2d"));
  CHECK(c.finite.at("dimension") == std::set<Rational>{0, 1});
  CHECK_FALSE(c.finite.count("x"));
  auto f3 = check_restrictions(load("fibonacci"));
  CHECK(f3.finite.at("z") == std::set<Rational>{-1, 1});
  auto d = check_restrictions(parse("k = 0\nwhile true:\n  k = DiscreteUniform(1, 3)\n  c = Categorical(1/2, 1/4, 1/4)\nend\n"));
  CHECK(d.finite.at("k") == std::set<Rational>{0, 1, 2, 3});
  CHECK(d.finite.at("c") == std::set<Rational>{0, 1, 2});
}

TEST_CASE("defective variables") {
  CHECK(check_restrictions(load("squares_coupled")).defective == std::set<std::string>{"x", "y"});
  CHECK(check_restrictions(load("nonlinear_cycle")).defective == std::set<std::string>{"u", "w", "x"});
  CHECK(check_restrictions(load("fibonacci")).defective.empty());
  CHECK(check_restrictions(load("poly_growth")).defective.empty());
  // A non-linear self-update of a finite variable is harmless.
  CHECK(check_restrictions(load("geometric")).defective.empty());
}

TEST_CASE("normalize splits locations off draws and folds the guard") {
  Ast g = normalize(load("gaussian_square"));
  bool found = false;
  for_each_statement(g.body, [&](const Statement& s) {
    if (s.kind != Statement::Kind::Assign || !s.assign.rhs[0].draw) return;
    const auto& d = *s.assign.rhs[0].draw;
    found = true;
    REQUIRE(d.shift);
    CHECK(print_expr(*d.shift) == "y");
    CHECK(print_expr(*d.args[0]) == "0");
  });
  CHECK(found);
  Ast geo = normalize(load("geometric"));
  CHECK_FALSE(geo.has_guard());
  REQUIRE(geo.body.size() == 1);
  CHECK(geo.body[0].kind == Statement::Kind::If);
}

TEST_CASE("printer output") {
  Ast a = parse("x = 0\nwhile true:\n  x = x + 1 {1/3} x - 2\nend\n");
  std::string text = print_program(a);
  CHECK(text.find("while true:") != std::string::npos);
  CHECK(text.find("end") != std::string::npos);
  CHECK(parse(text) == a);
}
