#include "doctest.h"

#include "csa/canon.hpp"

#include <cmath>

using namespace csa;

namespace {

const VarContext ctx = VarContext::standard({"c1", "c2"});
const VarContext tctx("X", {"Y", "Z"}, {"c1", "c2"});

Expr P(const std::string& s) { return parse(s, ctx); }
CoefficientFn fn(const std::string& s) { return CoefficientFn(P(s), "x"); }

const PointTransformation polar_inv{parse("1/x", ctx), parse("exp(y)*cos(z)", ctx), parse("exp(y)*sin(z)", ctx)};
const PointTransformation polar{parse("x", ctx), parse("exp(y)*cos(z)", ctx), parse("exp(y)*sin(z)", ctx)};

double max_abs_diff(const CoefficientFn& f, const std::function<double(double)>& g, double lo, double hi) {
  double m = 0;
  for (int i = 0; i <= 100; ++i) {
    double x = lo + (hi - lo) * i / 100.0;
    m = std::max(m, std::fabs(f(x) - g(x)));
  }
  return m;
}

}  // namespace

TEST_CASE("transform: nonlinear example to the free particle") {
  auto sys = parse_system("-(y'^2)+z'^2-(2/x)*y'", "-2*y'*z'-(2/x)*z'", ctx);
  auto r = transform_system(sys, polar_inv, tctx);
  CHECK(zero_test(r.target.omega1).zero);
  CHECK(zero_test(r.target.omega2).zero);
  auto rep = match_target(r, parse_system("0", "0", tctx), polar_inv, ctx);
  CHECK(rep.holds);
}

TEST_CASE("transform: first-order target") {
  auto sys = parse_system("-(y'^2)+z'^2+c1*y'-c2*z'", "-2*y'*z'+c2*y'+c1*z'", ctx);
  auto r = transform_system(sys, polar, tctx);
  auto expected = parse_system("c1*Y'-c2*Z'", "c2*Y'+c1*Z'", tctx);
  CHECK(match_target(r, expected, polar, ctx).holds);
  auto wrong = parse_system("c1*Y'+c2*Z'", "c2*Y'+c1*Z'", tctx);
  CHECK_FALSE(match_target(r, wrong, polar, ctx).holds);
}

TEST_CASE("transform: identity and affine maps") {
  auto sys = parse_system("x*y'*z - y^2", "sin(x)*z'", ctx);
  auto r = transform_system(sys, PointTransformation::identity(ctx));
  CHECK(zero_test(r.target.omega1 - sys.omega1).zero);
  CHECK(zero_test(r.target.omega2 - sys.omega2).zero);

  // y'' = -z, z'' = y under (Y, Z) = (z, y) becomes Y'' = Z, Z'' = -Y
  auto rot = parse_system("-z", "y", ctx);
  PointTransformation swap{P("x"), P("z"), P("y")};
  auto s = transform_system(rot, swap, tctx);
  CHECK(zero_test(s.target.omega1 - parse("Z", tctx)).zero);
  CHECK(zero_test(s.target.omega2 + parse("Y", tctx)).zero);
}

TEST_CASE("transform: errors") {
  auto sys = parse_system("0", "0", ctx);
  CHECK_THROWS_AS(transform_system(sys, {P("y"), P("y"), P("z")}), NonInvertible);
  CHECK_THROWS_AS(transform_system(sys, {P("1"), P("y"), P("z")}), DxXZero);
  CHECK_THROWS_AS(transform_system(sys, {P("x"), P("y^2"), P("z")}), NonInvertible);
  CHECK_THROWS_AS(transform_system(sys, {P("exp(x)"), P("y"), P("z")}), NonInvertible);
}

TEST_CASE("identify linear forms") {
  auto f = identify_linear_form(parse_system("c1*y'-c2*z'", "c2*y'+c1*z'", ctx));
  REQUIRE(f);
  CHECK(f->kind == FormKind::FirstOrder);
  auto z = identify_linear_form(parse_system("y-z", "y+z", ctx));
  REQUIRE(z);
  CHECK(z->kind == FormKind::ZeroOrder);
  auto red = identify_linear_form(parse_system("-(x*z)", "x*y", ctx));
  REQUIRE(red);
  CHECK(red->kind == FormKind::Reduced);
  auto opt = identify_linear_form(parse_system("y+2*z", "3*y-z", ctx));
  REQUIRE(opt);
  CHECK(opt->kind == FormKind::Optimal);
  auto gen = identify_linear_form(parse_system("y'+1", "z", ctx));
  REQUIRE(gen);
  CHECK(gen->kind == FormKind::General);
  CHECK_FALSE(identify_linear_form(parse_system("y'^2", "0", ctx)));
}

TEST_CASE("reduce_optimal examples") {
  auto zero = fn("0");
  // zero trace: unchanged
  auto a = reduce_optimal(LinearForm::general({zero, zero, zero, zero, zero, fn("3"), fn("3"), zero, zero, zero}, 0, 1));
  CHECK(a.optimal.coefficients[0].is_zero());
  CHECK(zero_test(a.optimal.coefficients[1].expr() - constant(3)).zero);
  CHECK(a.scaling.rho(0.7) == doctest::Approx(1.0));
  CHECK(a.scaling.new_x(0.7) == doctest::Approx(0.7));

  // trace 2: rho = cosh t, all coefficients vanish
  auto b = reduce_optimal(LinearForm::general({zero, zero, zero, zero, fn("1"), zero, zero, fn("1"), zero, zero}, 0, 1));
  CHECK(max_abs_diff(CoefficientFn(b.scaling.rho), [](double t) { return std::cosh(t); }, 0, 1) < 1e-8);
  CHECK(max_abs_diff(CoefficientFn(b.scaling.new_x), [](double t) { return std::tanh(t); }, 0, 1) < 1e-8);
  for (const auto& c : b.optimal.coefficients) CHECK(max_abs_diff(c, [](double) { return 0.0; }, 0, std::tanh(1.0)) < 1e-12);

  auto c = reduce_optimal(LinearForm::general({zero, zero, zero, zero, fn("1"), zero, zero, fn("-1"), zero, zero}, 0, 1));
  CHECK(zero_test(c.optimal.coefficients[0].expr() - constant(1)).zero);

  CHECK_THROWS_AS(
      reduce_optimal(LinearForm::general({fn("1"), zero, zero, zero, zero, zero, zero, zero, zero, zero}, 0, 1)),
      std::invalid_argument);
  // rho'' = -4 rho vanishes at pi/4
  try {
    reduce_optimal(LinearForm::general({zero, zero, zero, zero, fn("-4"), zero, zero, fn("-4"), zero, zero}, 0, 1));
    FAIL("expected RhoVanishes");
  } catch (const RhoVanishes& e) {
    CHECK(e.where == doctest::Approx(M_PI / 4).epsilon(1e-3));
  }
}

TEST_CASE("reduce_zero_order examples") {
  auto a = reduce_zero_order(LinearForm::zero_order(fn("0"), fn("1"), 0, 1));
  CHECK(zero_test(a.reduced.coefficients[0].expr() - constant(1)).zero);
  auto b = reduce_zero_order(LinearForm::zero_order(fn("0"), fn("1/x"), 1, 2));
  CHECK(zero_test(b.reduced.coefficients[0].expr() - P("1/x")).zero);

  // rho'' = (2/x^2) rho, rho(1) = 1, rho'(1) = 0: rho = (x^3 + 2)/(3x)
  auto c = reduce_zero_order(LinearForm::zero_order(fn("2/x^2"), fn("1"), 1, 2));
  auto rho = [](double x) { return (x * x * x + 2) / (3 * x); };
  CHECK(max_abs_diff(CoefficientFn(c.scaling.rho), rho, 1, 2) < 1e-8);
  CHECK(c.scaling.halfstep_error < 1e-8);
  const auto& t = c.scaling.rho.xs();
  const auto& beta = c.reduced.coefficients[0].table();
  for (std::size_t i = 0; i < t.size(); i += 50) {
    double nx = c.scaling.new_x.ys()[i];
    CHECK(beta(nx) == doctest::Approx(std::pow(rho(t[i]), 4)).epsilon(1e-8));
  }

  // cosh rescaling of the unit zero-order form: beta = 1/(1 - x~^2)^2
  auto d = reduce_zero_order(LinearForm::zero_order(fn("1"), fn("1"), 0, 1));
  const auto& bd = d.reduced.coefficients[0].table();
  for (double xt : {0.1, 0.4, 0.7}) CHECK(bd(xt) == doctest::Approx(1 / std::pow(1 - xt * xt, 2)).epsilon(1e-7));
}

TEST_CASE("reduced form solutions map back to the zero-order form") {
  auto zo = LinearForm::zero_order(fn("1"), fn("1"), 0, 1);
  auto red = reduce_zero_order(zo, 1e-3);
  Rhs fr = [&](double x, const State& s) { return red.reduced.rhs(x, s); };
  Rhs fz = [&](double x, const State& s) { return zo.rhs(x, s); };
  State s0{0.3, -0.2, 0.5, 0.1};
  auto [x0, S0] = red.to_reduced(0.0, s0);
  CHECK(x0 == doctest::Approx(0.0));
  auto direct = rk4(fz, 0.0, s0, 0.9, 1e-3);
  auto reduced = rk4(fr, 0.0, S0, red.scaling.new_x(0.9), 1e-4);
  auto back = red.from_reduced(reduced.xs.back(), reduced.states.back());
  CHECK(back.first == doctest::Approx(0.9).epsilon(1e-9));
  for (int k = 0; k < 4; ++k) CHECK(back.second[k] == doctest::Approx(direct.states.back()[k]).epsilon(1e-6));
}

TEST_CASE("reduce_first_order examples") {
  auto a = reduce_first_order(LinearForm::first_order(fn("0"), fn("0"), 0, 1));
  CHECK(a.zero_order.coefficients[0].is_zero());
  CHECK(a.zero_order.coefficients[1].is_zero());
  CHECK(a.M1(0.5) == doctest::Approx(1.0));

  auto b = reduce_first_order(LinearForm::first_order(fn("2"), fn("0"), 0, 1));
  CHECK(zero_test(b.zero_order.coefficients[0].expr() - constant(1)).zero);  // c^2/4
  CHECK(b.M1(1.0) == doctest::Approx(std::exp(1.0)).epsilon(1e-10));
  CHECK(b.table_deviation < 1e-8);

  auto c = reduce_first_order(LinearForm::first_order(fn("0"), fn("2"), 0, 1));
  CHECK(zero_test(c.zero_order.coefficients[0].expr() + constant(1)).zero);  // -c^2/4
  CHECK(c.zero_order.coefficients[1].is_zero());
  CHECK(c.M2(0.6) == doctest::Approx(std::sin(0.6)).epsilon(1e-10));
  CHECK(c.table_deviation < 1e-8);

  // variable coefficients: closed form and tables agree
  auto d = reduce_first_order(LinearForm::first_order(fn("1+x"), fn("1+x"), 0, 1));
  CHECK(d.table_deviation < 1e-7);
  CHECK(zero_test(d.zero_order.coefficients[0].expr() + constant(Rational(1, 2))).zero);
  CHECK(zero_test(d.zero_order.coefficients[1].expr() - P("(x^2+2*x)/2")).zero);

  // state mapping inverts
  State s{0.2, 0.4, -1, 0.5};
  State w = d.to_zero_order(0.8, s);
  State u = d.from_zero_order(0.8, w);
  for (int k = 0; k < 4; ++k) CHECK(u[k] == doctest::Approx(s[k]));
}

TEST_CASE("zero-order solutions map to first-order solutions") {
  auto fo = LinearForm::first_order(fn("1+x"), fn("1+x"), 0, 1);
  auto red = reduce_first_order(fo);
  Rhs f1 = [&](double x, const State& s) { return fo.rhs(x, s); };
  Rhs f0 = [&](double x, const State& s) { return red.zero_order.rhs(x, s); };
  State s0{1, 0, 0, 1};
  auto direct = rk4(f1, 0, s0, 1, 1e-3);
  auto zo = rk4(f0, 0, red.to_zero_order(0, s0), 1, 1e-3);
  State back = red.from_zero_order(1, zo.states.back());
  for (int k = 0; k < 4; ++k) CHECK(back[k] == doctest::Approx(direct.states.back()[k]).epsilon(1e-7));
}

TEST_CASE("linear equivalence verdicts") {
  auto a = attempt_linear_equivalence({1, 2, 3}, {0, 1});
  CHECK_FALSE(a.consistent);
  CHECK_FALSE(a.chain.empty());
  CHECK(std::any_of(a.chain.begin(), a.chain.end(),
                    [](const std::string& s) { return s.find("Inconsistent") != std::string::npos; }));
  for (auto t : std::vector<std::array<Rational, 2>>{{0, 0}, {1, 0}, {0, 1}, {2, -3}}) {
    CHECK_FALSE(attempt_linear_equivalence({1, 0, 0}, t).consistent);
    CHECK_FALSE(attempt_linear_equivalence({0, 1, 0}, t).consistent);
    CHECK_FALSE(attempt_linear_equivalence({0, 0, 1}, t).consistent);
  }

  auto fp = attempt_linear_equivalence({0, 0, 0}, {0, 0});
  CHECK(fp.consistent);
  REQUIRE(fp.solution);
  CHECK(((*fp.solution)[0] * (*fp.solution)[3] - (*fp.solution)[1] * (*fp.solution)[2]) != 0);
  CHECK_FALSE(attempt_linear_equivalence({0, 0, 0}, {1, 0}).consistent);

  auto nil = attempt_linear_equivalence({1, 1, -1}, {0, 1});
  CHECK_FALSE(nil.consistent);
  CHECK(nil.outside_reduced_reach);
  CHECK_FALSE(a.outside_reduced_reach);

  // concrete constants can still be similar
  auto sim = attempt_linear_equivalence({0, 1, -1}, {0, 1});
  CHECK_FALSE(sim.consistent);
  CHECK(sim.value_level_similar);
  CHECK_FALSE(attempt_linear_equivalence({1, 2, 3}, {0, 1}).value_level_similar);
}

TEST_CASE("linear equivalence is symmetric and the variable case reduces") {
  std::vector<std::array<Rational, 3>> opts{{1, 2, 3}, {0, 0, 0}, {1, 1, -1}, {0, 1, 0}};
  std::vector<std::array<Rational, 2>> zos{{0, 0}, {0, 1}, {1, 0}, {2, 5}};
  for (const auto& o : opts) {
    for (const auto& z : zos) {
      auto f = attempt_linear_equivalence(o, z);
      auto r = attempt_linear_equivalence_reverse(z, o);
      CHECK(f.consistent == r.consistent);
      CHECK(f.value_level_similar == r.value_level_similar);
      auto v = attempt_linear_equivalence_variable(o, z);
      CHECK(v.consistent == f.consistent);
      CHECK(v.chain.size() > f.chain.size());
    }
  }
}

TEST_CASE("tabulated serialization round trip") {
  Tabulated t({0, 0.5, 1}, {1, 2, 0}, {0, 1, -1});
  t.source = "test table";
  t.step = 0.5;
  t.error_estimate = 1e-9;
  Tabulated u = Tabulated::deserialize(t.serialize());
  CHECK(u.source == t.source);
  CHECK(u.step == t.step);
  CHECK(u.error_estimate == t.error_estimate);
  for (double x : {0.0, 0.3, 0.77, 1.0}) {
    CHECK(u(x) == t(x));
    CHECK(u.derivative(x) == t.derivative(x));
  }
  CHECK_THROWS_AS(t(1.5), std::out_of_range);
}
