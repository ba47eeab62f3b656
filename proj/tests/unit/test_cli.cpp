#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

#include "helpers.hpp"
#include "loopm/cli.hpp"

using namespace loopm;
using loopm::testing::corpus_path;

namespace {

struct Result {
  int code;
  std::string out, err;
};

Result cli(std::vector<std::string> args) {
  args.insert(args.begin(), "loopm");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  int code = main_with_args(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

bool has_line(const std::string& text, const std::string& line) {
  std::istringstream in(text);
  std::string l;
  while (std::getline(in, l))
    if (l == line) return true;
  return false;
}

}  // namespace

TEST_CASE("closed forms of the two dimensional walk") {
  auto r = cli({corpus_path("walk2d"), "--goals", "E(x)", "E(x**2)", "E(y**2)", "--invariants"});
  CHECK(r.code == kExitOk);
  CHECK(has_line(r.out, "E(x) = 0"));
  CHECK(has_line(r.out, "E(x**2) = 2*n*(1 - p)"));
  CHECK(has_line(r.out, "E(y**2) = 2*n*p"));
  CHECK(r.err.empty());
}

TEST_CASE("example invariant is printed in canonical form") {
  auto r = cli({corpus_path("poly_growth"), "--goals", "E(x)", "E(y)", "--invariants"});
  CHECK(r.code == kExitOk);
  CHECK(has_line(r.out, "E(x)**3 + 5*E(x)**2 + 8*E(x) - E(y)**2 + 4 = 0"));
}

TEST_CASE("after loop moments") {
  auto r = cli({corpus_path("geometric"), "--goals", "E(count)", "--after_loop"});
  CHECK(r.code == kExitOk);
  CHECK(has_line(r.out, "E(count) [after loop] = 2"));
  auto d = cli({corpus_path("geometric"), "--goals", "E(x)", "--after_loop"});
  CHECK(d.code == kExitOk);
  CHECK(d.out.find("diverges") != std::string::npos);
  auto u = cli({corpus_path("fibonacci"), "--after_loop"});
  CHECK(u.code == kExitAnalysis);
}

TEST_CASE("sensitivities, including single dash flags") {
  auto a = cli({corpus_path("normal_drift"), "--goals", "E(y)", "--sens_diff", "p"});
  CHECK(a.code == kExitOk);
  CHECK(a.out.find("d/dp E(y) = ") != std::string::npos);
  auto b = cli({corpus_path("nonlinear_cycle"), "--goals", "E(u)", "-sens", "p"});
  CHECK(b.code == kExitOk);
  CHECK(b.out.find("d/dp E(u) = ") != std::string::npos);
  auto c = cli({corpus_path("normal_drift"), "--goals", "E(y)", "-sens_diff", "p"});
  CHECK(c.code == kExitOk);
  CHECK(c.out == a.out);
}

TEST_CASE("unsolvable loops") {
  auto r = cli({corpus_path("squares_coupled"), "--synth_unsolv_inv", "--synth_solv_loop", "--inv_deg", "1"});
  CHECK(r.code == kExitOk);
  CHECK(has_line(r.out, "E(x + y) satisfies s' = 2*s - 3*z + 3"));
  CHECK(has_line(r.out, "E(x + y) = 2**n*(x0 + y0 + 2) - (-1)**n/2 - 3/2"));
  CHECK(has_line(r.out, "  s = 2*s - 3*z + 3"));
}

TEST_CASE("diagnostics name the module and the restriction") {
  auto r = cli({corpus_path("nonlinear_cycle"), "--goals", "E(u)"});
  CHECK(r.code == kExitAnalysis);
  CHECK(r.err.find("error[DefectiveDependency]") != std::string::npos);
  CHECK(r.err.find("(R3)") != std::string::npos);
  auto j = cli({corpus_path("nonlinear_cycle"), "--goals", "E(u)", "--format", "json"});
  CHECK(j.code == kExitAnalysis);
  auto doc = nlohmann::json::parse(j.out);
  REQUIRE(doc["diagnostics"].size() == 1);
  CHECK(doc["diagnostics"][0]["kind"] == "DefectiveDependency");
}

TEST_CASE("usage errors") {
  CHECK(cli({}).code == kExitUsage);
  CHECK(cli({"/nonexistent/loop.prob"}).code == kExitUsage);
  CHECK(cli({corpus_path("normal_drift"), "--sens", "p", "--sens_diff", "p"}).code == kExitUsage);
  CHECK(cli({corpus_path("normal_drift"), "--format", "xml"}).code == kExitUsage);
  CHECK(cli({corpus_path("normal_drift"), "--goals", "E(x"}).code != kExitOk);
}

TEST_CASE("json report") {
  auto r = cli({corpus_path("geometric"), "--goals", "E(count)", "E(stop)", "--invariants", "--format", "json"});
  CHECK(r.code == kExitOk);
  auto doc = nlohmann::json::parse(r.out);
  REQUIRE(doc["goals"].size() == 2);
  CHECK(doc["goals"][0]["goal"] == "E(count)");
  CHECK(doc["goals"][0]["closed_form"] == "2 - 2*(1/2)**n");
  CHECK(doc["goals"][0]["closed_form_terms"]["terms"].size() == 2);
  CHECK(doc["invariants"][0] == "E(count) - 2*E(stop) = 0");
  CHECK(doc["diagnostics"].empty());
}

TEST_CASE("output is deterministic") {
  std::vector<std::string> args = {corpus_path("random_walk"), "--goals", "E(x)", "E(y)", "E(x*y)", "--invariants"};
  auto a = cli(args), b = cli(args);
  CHECK(a.code == kExitOk);
  CHECK(a.out == b.out);
  std::vector<std::string> sim = {corpus_path("walk2d"), "--simulate", "5", "--bind", "p=1/2", "--samples", "500",
                                  "--seed", "3"};
  auto s1 = cli(sim), s2 = cli(sim);
  CHECK(s1.code == kExitOk);
  CHECK(s1.out == s2.out);
}

TEST_CASE("simulation with csv output") {
  std::string path = "loopm_cli_test.csv";
  auto r = cli({corpus_path("fibonacci"), "--simulate", "10", "--samples", "2", "--goals", "E(a)", "--csv", path});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("E(a) [n=10, 2 samples] = 55") != std::string::npos);
  std::ifstream in(path);
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("sample,iteration", 0) == 0);
  std::remove(path.c_str());
  auto missing = cli({corpus_path("walk2d"), "--simulate", "3"});
  CHECK(missing.code == kExitAnalysis);
}

TEST_CASE("recurrence dump") {
  auto r = cli({corpus_path("geometric"), "--goals", "E(count)", "--dump"});
  CHECK(r.code == kExitOk);
  CHECK(r.out.find("E(count)' = ") != std::string::npos);
}
