#include "doctest.h"

#include "csa/csa.hpp"

#include <random>

using namespace csa;

namespace {

const VarContext ctx = VarContext::standard({"c1", "c2"});
Expr P(const std::string& s) { return parse(s, ctx); }
bool same(const Expr& a, const Expr& b) { return zero_test(a - b).zero; }

CubicForm zero_form() {
  CubicForm cf;
  for (int i = 0; i < 2; ++i) {
    cf.alpha[i].fill(constant(0));
    cf.beta[i].fill(constant(0));
    cf.gamma[i].fill(constant(0));
    cf.delta[i] = constant(0);
  }
  return cf;
}

}  // namespace

TEST_CASE("extract_cubic: geodesic-type example") {
  auto sys = parse_system("-(y'^2)+z'^2-(2/x)*y'", "-2*y'*z'-(2/x)*z'", ctx);
  CubicForm cf = extract_cubic(sys);
  CHECK(cf.beta[0][0] == constant(1));
  CHECK(cf.beta[0][2] == constant(-1));
  CHECK(cf.beta[1][1] == constant(2));
  CHECK(same(cf.gamma[0][0], P("2/x")));
  CHECK(same(cf.gamma[1][1], P("2/x")));
  for (int i = 0; i < 2; ++i) {
    for (const auto& e : cf.alpha[i]) CHECK(e.is_zero());
    CHECK(cf.delta[i].is_zero());
  }
  CHECK(cf.beta[0][1].is_zero());
  CHECK(cf.gamma[0][1].is_zero());
  CHECK(cf.beta[1][0].is_zero());
  CHECK(cf.beta[1][2].is_zero());
  CHECK(cf.gamma[1][0].is_zero());

  auto t2 = check_cubic_correspondence(cf);
  CHECK(t2.report.holds);
  REQUIRE(t2.coefficients);
  CHECK((*t2.coefficients)[2].first == constant(1));
  CHECK((*t2.coefficients)[2].second.is_zero());
  CHECK(same((*t2.coefficients)[1].first, P("2/x")));
}

TEST_CASE("extract_cubic: free particle and rejections") {
  CubicForm cf = extract_cubic(parse_system("0", "0", ctx));
  for (int i = 0; i < 2; ++i) {
    for (const auto& e : cf.alpha[i]) CHECK(e.is_zero());
    for (const auto& e : cf.beta[i]) CHECK(e.is_zero());
  }
  CHECK(check_cubic_correspondence(cf).report.holds);
  CHECK_THROWS_AS(extract_cubic(parse_system("exp(y')", "0", ctx)), NotPolynomial);
  try {
    extract_cubic(parse_system("y'^2*z'^2", "0", ctx));
    FAIL("expected DegreeTooHigh");
  } catch (const DegreeTooHigh& e) {
    CHECK(print(e.monomial) == "y'^2*z'^2");
  }
  CHECK_THROWS_AS(OdeSystem2(ctx, symbol("y''"), constant(0)), std::invalid_argument);
}

TEST_CASE("check_cubic_correspondence names the failing condition") {
  CubicForm cf = zero_form();
  cf.beta[0][0] = constant(1);
  cf.beta[1][1] = constant(1);
  auto t2 = check_cubic_correspondence(cf);
  CHECK_FALSE(t2.report.holds);
  REQUIRE(t2.report.first_failure());
  CHECK(t2.report.first_failure()->name == "beta11 = beta22/2");
  CHECK_FALSE(t2.coefficients);
}

TEST_CASE("extract_cubic then assemble is the identity on random cubic systems") {
  std::mt19937_64 rng(99);
  const std::vector<std::string> coeffs{"x", "y", "z*x", "1/x", "sin(x)", "c1", "y^2 - z", "exp(x)*y", "3", "-2"};
  const std::vector<std::string> monos{"y'^3", "y'^2*z'", "y'*z'^2", "z'^3", "y'^2", "y'*z'", "z'^2", "y'", "z'", "1"};
  for (int n = 0; n < 30; ++n) {
    std::string w[2];
    for (auto& s : w) {
      s = "0";
      for (int k = 0; k < 4; ++k) s += " + (" + coeffs[rng() % coeffs.size()] + ")*" + monos[rng() % monos.size()];
    }
    auto sys = parse_system(w[0], w[1], ctx);
    OdeSystem2 back = assemble(extract_cubic(sys), ctx);
    INFO(w[0]);
    CHECK(same(back.omega1, sys.omega1));
    CHECK(same(back.omega2, sys.omega2));
  }
}
