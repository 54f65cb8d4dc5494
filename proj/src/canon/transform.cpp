#include "csa/canon.hpp"

#include <functional>
#include <random>

namespace csa {

namespace {

// internal names for the new variables while old and new alphabets coexist
const std::string kX = "X#", kY = "Y#", kZ = "Z#", kDY = "Y'#", kDZ = "Z'#";

using Rewriter = std::function<Expr(const Expr&)>;

bool is_zero(const Expr& e) { return zero_test(e).zero; }

// inverse of X(x) for X affine in x or 1/X affine in x
Expr invert_independent(const Expr& X, const std::string& x) {
  auto line = [&](const Expr& e) -> std::optional<std::pair<Expr, Expr>> {
    std::vector<std::pair<std::vector<int>, Expr>> terms;
    try {
      terms = polynomial_terms(e, {x});
    } catch (const NotPolynomial&) {
      return std::nullopt;
    }
    Expr a = constant(0), b = constant(0);
    for (const auto& [exps, c] : terms) {
      if (exps[0] > 1) return std::nullopt;
      (exps[0] == 1 ? a : b) = c;
    }
    if (a.is_zero()) return std::nullopt;
    return std::pair{a, b};
  };
  const Expr Xn = symbol(kX);
  if (auto ab = line(simplify(X))) return simplify((Xn - ab->second) / ab->first);
  if (auto ab = line(simplify(constant(1) / X))) return simplify((constant(1) / Xn - ab->second) / ab->first);
  throw NonInvertible("no inverse for the independent-variable map " + print(X) +
                      " (supported: affine or reciprocal-affine in " + x + ")");
}

Rewriter substitution_rewriter(std::map<std::string, Expr> m) {
  return [m = std::move(m)](const Expr& e) { return substitute(e, m); };
}

bool split_linear(const Expr& e, const std::string& v, Expr& k, Expr& rest) {
  std::vector<std::pair<std::vector<int>, Expr>> terms;
  try {
    terms = polynomial_terms(e, {v});
  } catch (const NotPolynomial&) {
    return false;
  }
  k = constant(0);
  rest = constant(0);
  for (const auto& [exps, c] : terms) {
    if (exps[0] > 1) return false;
    (exps[0] == 1 ? k : rest) = c;
  }
  return true;
}

// exponential-polar inverse: e^y -> r, cos z -> Y/r, sin z -> Z/r with r^2 = Y^2 + Z^2
Rewriter polar_rewriter(const VarContext& ctx, Expr x_of_X) {
  const std::string x = ctx.independent(), y = ctx.dependent(0), z = ctx.dependent(1);
  const Expr Y = symbol(kY), Z = symbol(kZ);
  const Expr r2 = Y * Y + Z * Z;
  auto rw = std::make_shared<std::function<Expr(const Expr&)>>();
  *rw = [=](const Expr& e) -> Expr {
    switch (e.kind()) {
      case Kind::Symbol:
        if (e.name() == x) return x_of_X;
        if (e.name() == y) return make_div(make_log(r2), constant(2));
        if (e.name() == z) throw NonInvertible("the polar angle " + z + " has no single-valued inverse");
        return e;
      case Kind::Exp: {
        Expr k, rest;
        if (split_linear(e.arg(), y, k, rest) && k.is_constant()) {
          return make_mul({pow(r2, k.value() / 2), make_exp((*rw)(rest))});
        }
        break;
      }
      case Kind::Sin:
      case Kind::Cos: {
        if (e.arg().is_symbol(z)) {
          return make_mul({e.kind() == Kind::Cos ? Y : Z, pow(r2, Rational(-1, 2))});
        }
        break;
      }
      default:
        break;
    }
    if (e.args().empty()) return e;
    std::vector<Expr> args;
    for (const auto& a : e.args()) args.push_back((*rw)(a));
    return rebuild(e, std::move(args));
  };
  return [rw](const Expr& e) { return (*rw)(e); };
}

// inverse of the dependent-variable map in the supported families
Rewriter point_inverse(const PointTransformation& T, const VarContext& ctx, const Expr& x_of_X) {
  const std::string x = ctx.independent(), y = ctx.dependent(0), z = ctx.dependent(1);
  const Expr ys = symbol(y), zs = symbol(z);
  if (is_zero(T.Y - make_exp(ys) * make_cos(zs)) && is_zero(T.Z - make_exp(ys) * make_sin(zs))) {
    return polar_rewriter(ctx, x_of_X);
  }
  std::array<std::array<Expr, 3>, 2> a;  // y, z, 1 coefficients
  const std::array<const Expr*, 2> rows{&T.Y, &T.Z};
  for (int i = 0; i < 2; ++i) {
    a[i].fill(constant(0));
    std::vector<std::pair<std::vector<int>, Expr>> terms;
    try {
      terms = polynomial_terms(*rows[i], {y, z});
    } catch (const NotPolynomial&) {
      throw NonInvertible("dependent-variable map is neither affine nor exponential-polar");
    }
    for (const auto& [exps, c] : terms) {
      if (exps[0] + exps[1] > 1) throw NonInvertible("dependent-variable map is neither affine nor exponential-polar");
      a[i][exps[0] == 1 ? 0 : exps[1] == 1 ? 1 : 2] = c;
    }
  }
  Expr det = simplify(a[0][0] * a[1][1] - a[0][1] * a[1][0]);
  if (is_zero(det)) throw NonInvertible("affine dependent-variable map is singular");
  const Expr u = symbol(kY) - a[0][2], v = symbol(kZ) - a[1][2];
  Expr yi = simplify((a[1][1] * u - a[0][1] * v) / det);
  Expr zi = simplify((a[0][0] * v - a[1][0] * u) / det);
  yi = substitute(yi, {{x, x_of_X}});
  zi = substitute(zi, {{x, x_of_X}});
  return substitution_rewriter({{x, x_of_X}, {y, yi}, {z, zi}});
}

void jacobian_warning(const PointTransformation& T, const VarContext& ctx, std::vector<std::string>& warnings) {
  const std::string x = ctx.independent(), y = ctx.dependent(0), z = ctx.dependent(1);
  std::array<Expr, 3> F{T.X, T.Y, T.Z};
  std::array<std::string, 3> v{x, y, z};
  std::array<std::array<Expr, 3>, 3> J;
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) J[i][j] = differentiate(F[i], v[j]);
  }
  std::mt19937_64 rng(0x7a11);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  for (int n = 0; n < 24; ++n) {
    Bindings b{{x, mag(rng)}, {y, mag(rng) - 1.0}, {z, mag(rng) - 1.0}};
    try {
      Eigen::Matrix3d m;
      for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) m(i, j) = eval(J[i][j], b);
      }
      if (std::fabs(m.determinant()) < 1e-12 * (1 + m.norm())) {
        warnings.push_back("Jacobian of the transformation is singular near a sampled point");
        return;
      }
    } catch (const EvalError&) {
    }
  }
}

}  // namespace

PointTransformation PointTransformation::identity(const VarContext& ctx) {
  return {symbol(ctx.independent()), symbol(ctx.dependent(0)), symbol(ctx.dependent(1))};
}

TransformResult transform_system(const OdeSystem2& sys, const PointTransformation& T) {
  return transform_system(sys, T, sys.ctx);
}

TransformResult transform_system(const OdeSystem2& sys, const PointTransformation& T, const VarContext& target_ctx) {
  const VarContext& ctx = sys.ctx;
  const std::string x = ctx.independent(), y = ctx.dependent(0), z = ctx.dependent(1);
  const std::string dy = ctx.first_derivative(0), dz = ctx.first_derivative(1);
  const std::map<std::string, Expr> chain{{y, symbol(dy)}, {z, symbol(dz)}, {dy, sys.omega1}, {dz, sys.omega2}};
  auto D = [&](const Expr& e) { return total_derivative(e, x, chain); };

  TransformResult r{OdeSystem2(target_ctx, constant(0), constant(0)), {}, {}, {}};
  jacobian_warning(T, ctx, r.warnings);

  Expr DX = D(T.X);
  if (is_zero(DX)) throw DxXZero("total derivative of the new independent variable vanishes identically");
  r.first[0] = simplify(D(T.Y) / DX);
  r.first[1] = simplify(D(T.Z) / DX);
  r.second[0] = simplify(D(r.first[0]) / DX);
  r.second[1] = simplify(D(r.first[1]) / DX);

  if (depends_on(T.X, y) || depends_on(T.X, z)) {
    throw NonInvertible("new independent variable must depend on " + x + " only");
  }
  Expr x_of_X = invert_independent(T.X, x);
  Rewriter inverse = point_inverse(T, ctx, x_of_X);

  // y', z' from Y', Z': [Y_y Y_z; Z_y Z_z] (y', z') = X_x (Y', Z') - (Y_x, Z_x)
  Expr Xx = differentiate(T.X, x);
  Expr jyy = differentiate(T.Y, y), jyz = differentiate(T.Y, z);
  Expr jzy = differentiate(T.Z, y), jzz = differentiate(T.Z, z);
  Expr p = Xx * symbol(kDY) - differentiate(T.Y, x);
  Expr q = Xx * symbol(kDZ) - differentiate(T.Z, x);
  Expr det = jyy * jzz - jyz * jzy;
  Expr dyi = simplify((jzz * p - jyz * q) / det);
  Expr dzi = simplify((jyy * q - jzy * p) / det);

  const std::map<std::string, Expr> rename{{kX, symbol(target_ctx.independent())},
                                           {kY, symbol(target_ctx.dependent(0))},
                                           {kZ, symbol(target_ctx.dependent(1))},
                                           {kDY, symbol(target_ctx.first_derivative(0))},
                                           {kDZ, symbol(target_ctx.first_derivative(1))}};
  std::array<Expr, 2> w;
  for (int i = 0; i < 2; ++i) {
    Expr e = simplify(substitute(r.second[i], {{dy, dyi}, {dz, dzi}}));
    e = simplify(inverse(e));
    w[i] = simplify(substitute(e, rename));
  }
  r.target = OdeSystem2(target_ctx, w[0], w[1]);
  return r;
}

ConditionReport match_target(const TransformResult& r, const OdeSystem2& expected, const PointTransformation& T,
                             const VarContext& /*source_ctx*/) {
  const VarContext& t = expected.ctx;
  ConditionReport rep;
  rep.add(decide("target omega1 in new variables", r.target.omega1, expected.omega1));
  rep.add(decide("target omega2 in new variables", r.target.omega2, expected.omega2));
  const std::map<std::string, Expr> pull{{t.independent(), T.X},
                                         {t.dependent(0), T.Y},
                                         {t.dependent(1), T.Z},
                                         {t.first_derivative(0), r.first[0]},
                                         {t.first_derivative(1), r.first[1]}};
  rep.add(decide("target omega1 pulled back", r.second[0], substitute(expected.omega1, pull)));
  rep.add(decide("target omega2 pulled back", r.second[1], substitute(expected.omega2, pull)));
  return rep;
}

}  // namespace csa
