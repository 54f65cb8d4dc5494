#include "doctest.h"

#include "csa/csa.hpp"

#include <random>

using namespace csa;

namespace {

const VarContext ctx = VarContext::standard({"c1", "c2"});
Expr P(const std::string& s) { return parse(s, ctx); }
bool same(const Expr& a, const Expr& b) { return zero_test(a - b).zero; }

ExprPair cmul(const ExprPair& a, const ExprPair& b) {
  return {simplify(a.first * b.first - a.second * b.second), simplify(a.first * b.second + a.second * b.first)};
}
ExprPair cadd(const ExprPair& a, const ExprPair& b) { return {simplify(a.first + b.first), simplify(a.second + b.second)}; }

// sum_k c_k(x) (y + i z)^k with complex coefficients c_k
ExprPair random_analytic(std::mt19937_64& rng) {
  const std::vector<std::string> fx{"1", "x", "2", "1/x", "x^2 - 1", "exp(x)", "0", "-3"};
  ExprPair u{P("y"), P("z")};
  ExprPair acc{constant(0), constant(0)}, power{constant(1), constant(0)};
  int deg = static_cast<int>(rng() % 3);
  for (int k = 0; k <= deg; ++k) {
    ExprPair c{P(fx[rng() % fx.size()]), P(fx[rng() % fx.size()])};
    acc = cadd(acc, cmul(c, power));
    power = cmul(power, u);
  }
  return acc;
}

}  // namespace

TEST_CASE("check_cr examples") {
  CHECK(check_cr(parse_system("-(y'^2)+z'^2", "-2*y'*z'", ctx)).holds);
  auto r = check_cr(parse_system("y'^2", "0", ctx));
  CHECK_FALSE(r.holds);
  REQUIRE(r.first_failure());
  CHECK(r.first_failure()->name == "w1_y' = w2_z'");
  CHECK(check_cr(parse_system("c1*y'-c2*z'", "c2*y'+c1*z'", ctx)).holds);
}

TEST_CASE("complexify") {
  auto sys = parse_system("-(y'^2)+z'^2-(2/x)*y'", "-2*y'*z'-(2/x)*z'", ctx);
  ComplexOde c = complexify(sys);
  CHECK(c.re_omega() == sys.omega1);
  ComplexOde fp = complexify(parse_system("0", "0", ctx));
  CHECK(fp.re_omega().is_zero());
  try {
    complexify(parse_system("y'^2", "0", ctx));
    FAIL("expected CrViolated");
  } catch (const CrViolated& e) {
    CHECK(e.condition == "w1_y' = w2_z'");
  }
}

TEST_CASE("realify examples") {
  ExprPair zero{constant(0), constant(0)};
  OdeSystem2 fp = realify({zero, zero, zero, zero}, ctx);
  CHECK(fp.omega1.is_zero());
  CHECK(fp.omega2.is_zero());

  OdeSystem2 s = realify({zero, zero, ExprPair{constant(1), constant(0)}, zero}, ctx);
  CHECK(same(s.omega1, P("-(y'^2) + z'^2")));
  CHECK(same(s.omega2, P("-2*y'*z'")));

  // y'' = c1 y' - c2 z', z'' = c2 y' + c1 z' is u'' - (c1 + i c2) u' = 0
  OdeSystem2 lin = realify({zero, ExprPair{P("-c1"), P("-c2")}, zero, zero}, ctx);
  CHECK(same(lin.omega1, P("c1*y'-c2*z'")));
  CHECK(same(lin.omega2, P("c2*y'+c1*z'")));

  CHECK_THROWS_AS(realify({ExprPair{P("y"), constant(0)}, zero, zero, zero}, ctx), CrViolated);
}

TEST_CASE("realify output passes both checks and round-trips coefficients") {
  std::mt19937_64 rng(31337);
  for (int n = 0; n < 30; ++n) {
    std::array<ExprPair, 4> E;
    for (auto& e : E) e = random_analytic(rng);
    OdeSystem2 sys = realify(E, ctx);
    CHECK(check_cr(sys).holds);
    auto t2 = check_cubic_correspondence(extract_cubic(sys));
    REQUIRE(t2.report.holds);
    REQUIRE(t2.coefficients);
    for (int j = 0; j < 4; ++j) {
      CHECK(same((*t2.coefficients)[j].first, E[j].first));
      CHECK(same((*t2.coefficients)[j].second, E[j].second));
    }
    ComplexOde c = complexify(sys);
    CHECK(c.im_omega() == sys.omega2);

    // non-analytic perturbation
    OdeSystem2 bad(ctx, sys.omega1 + P("y"), sys.omega2);
    CHECK_FALSE(check_cr(bad).holds);
  }
}

TEST_CASE("realify of the geodesic-type coefficients reproduces the system") {
  auto sys = parse_system("-(y'^2)+z'^2-(2/x)*y'", "-2*y'*z'-(2/x)*z'", ctx);
  auto t2 = check_cubic_correspondence(extract_cubic(sys));
  REQUIRE(t2.coefficients);
  OdeSystem2 back = realify(*t2.coefficients, ctx);
  CHECK(same(back.omega1, sys.omega1));
  CHECK(same(back.omega2, sys.omega2));
}
