#include "csa/cubic.hpp"

namespace csa {

namespace {

void reject_second_derivatives(const Expr& e, const VarContext& ctx) {
  for (int i = 0; i < 2; ++i) {
    if (depends_on(e, ctx.second_derivative(i))) {
      throw std::invalid_argument("right-hand side contains " + ctx.second_derivative(i));
    }
  }
}

// exponent vectors (y', z') of the cubic monomials, in coefficient order
const std::array<std::array<int, 2>, 4> kCubic{{{3, 0}, {2, 1}, {1, 2}, {0, 3}}};
const std::array<std::array<int, 2>, 3> kQuadratic{{{2, 0}, {1, 1}, {0, 2}}};
const std::array<std::array<int, 2>, 2> kLinear{{{1, 0}, {0, 1}}};

Expr frac(const Expr& e, std::int64_t n, std::int64_t d) { return simplify(make_mul({constant(Rational(n, d)), e})); }

}  // namespace

OdeSystem2::OdeSystem2(VarContext c, Expr w1, Expr w2)
    : ctx(std::move(c)), omega1(std::move(w1)), omega2(std::move(w2)) {
  reject_second_derivatives(omega1, ctx);
  reject_second_derivatives(omega2, ctx);
}

OdeSystem2 parse_system(const std::string& omega1, const std::string& omega2, const VarContext& ctx) {
  return OdeSystem2(ctx, parse(omega1, ctx), parse(omega2, ctx));
}

const Condition* ConditionReport::first_failure() const {
  for (const auto& c : conditions) {
    if (!c.holds) return &c;
  }
  return nullptr;
}

void ConditionReport::add(Condition c) {
  holds = holds && c.holds;
  conditions.push_back(std::move(c));
}

Condition decide(const std::string& name, const Expr& lhs, const Expr& rhs) {
  Condition c;
  c.name = name;
  c.lhs = simplify(lhs);
  c.rhs = simplify(rhs);
  ZeroVerdict v = zero_test(lhs - rhs);
  c.holds = v.zero;
  c.method = v.method;
  c.dropped_samples = v.dropped_samples;
  return c;
}

CubicForm extract_cubic(const OdeSystem2& sys) {
  std::vector<std::string> vars{sys.ctx.first_derivative(0), sys.ctx.first_derivative(1)};
  CubicForm cf;
  for (int i = 0; i < 2; ++i) {
    std::map<std::array<int, 2>, Expr> by_exp;
    for (auto& [exps, coef] : polynomial_terms(sys.omega(i), vars)) {
      if (exps[0] + exps[1] > 3) {
        Expr m = monomial(vars, exps);
        throw DegreeTooHigh("term of degree " + std::to_string(exps[0] + exps[1]) + " in first derivatives: " +
                                print(m),
                            m);
      }
      // LHS convention: the coefficient moves across with a sign change
      by_exp[{exps[0], exps[1]}] = simplify(make_neg(coef));
    }
    auto get = [&](const std::array<int, 2>& k) {
      auto it = by_exp.find(k);
      return it == by_exp.end() ? constant(0) : it->second;
    };
    for (int j = 0; j < 4; ++j) cf.alpha[i][j] = get(kCubic[j]);
    for (int j = 0; j < 3; ++j) cf.beta[i][j] = get(kQuadratic[j]);
    for (int j = 0; j < 2; ++j) cf.gamma[i][j] = get(kLinear[j]);
    cf.delta[i] = get({0, 0});
  }
  return cf;
}

OdeSystem2 assemble(const CubicForm& cf, const VarContext& ctx) {
  std::vector<std::string> vars{ctx.first_derivative(0), ctx.first_derivative(1)};
  std::array<Expr, 2> w;
  for (int i = 0; i < 2; ++i) {
    std::vector<Expr> terms;
    for (int j = 0; j < 4; ++j) terms.push_back(cf.alpha[i][j] * monomial(vars, {kCubic[j][0], kCubic[j][1]}));
    for (int j = 0; j < 3; ++j) {
      terms.push_back(cf.beta[i][j] * monomial(vars, {kQuadratic[j][0], kQuadratic[j][1]}));
    }
    for (int j = 0; j < 2; ++j) terms.push_back(cf.gamma[i][j] * monomial(vars, {kLinear[j][0], kLinear[j][1]}));
    terms.push_back(cf.delta[i]);
    w[i] = simplify(make_neg(make_add(std::move(terms))));
  }
  return OdeSystem2(ctx, w[0], w[1]);
}

CubicCorrespondenceReport check_cubic_correspondence(const CubicForm& cf) {
  const auto& a = cf.alpha;
  const auto& b = cf.beta;
  const auto& g = cf.gamma;
  CubicCorrespondenceReport out;
  ConditionReport& r = out.report;
  r.add(decide("alpha11 = -alpha13/3", a[0][0], frac(a[0][2], -1, 3)));
  r.add(decide("-alpha13/3 = alpha22/3", frac(a[0][2], -1, 3), frac(a[1][1], 1, 3)));
  r.add(decide("alpha22/3 = -alpha24", frac(a[1][1], 1, 3), frac(a[1][3], -1, 1)));
  r.add(decide("-alpha12/3 = alpha14", frac(a[0][1], -1, 3), a[0][3]));
  r.add(decide("alpha14 = alpha21", a[0][3], a[1][0]));
  r.add(decide("alpha21 = -alpha23/3", a[1][0], frac(a[1][2], -1, 3)));
  r.add(decide("beta11 = beta22/2", b[0][0], frac(b[1][1], 1, 2)));
  r.add(decide("beta22/2 = -beta13", frac(b[1][1], 1, 2), frac(b[0][2], -1, 1)));
  r.add(decide("beta21 = -beta12/2", b[1][0], frac(b[0][1], -1, 2)));
  r.add(decide("-beta12/2 = -beta23", frac(b[0][1], -1, 2), frac(b[1][2], -1, 1)));
  r.add(decide("gamma11 = gamma22", g[0][0], g[1][1]));
  r.add(decide("gamma21 = -gamma12", g[1][0], frac(g[0][1], -1, 1)));
  if (r.holds) {
    out.coefficients = std::array<ExprPair, 4>{
        ExprPair{cf.delta[0], cf.delta[1]},
        ExprPair{g[0][0], frac(g[0][1], -1, 1)},
        ExprPair{b[0][0], frac(b[0][1], -1, 2)},
        ExprPair{a[0][0], frac(a[0][1], -1, 3)},
    };
  }
  return out;
}

}  // namespace csa
