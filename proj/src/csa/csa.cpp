#include "csa/csa.hpp"

namespace csa {

namespace {

void require(const ConditionReport& r) {
  if (const Condition* f = r.first_failure()) {
    throw CrViolated("Cauchy-Riemann condition fails: " + f->name, f->name);
  }
}

}  // namespace

ConditionReport check_cr(const OdeSystem2& sys) {
  const VarContext& c = sys.ctx;
  const std::string &y = c.dependent(0), &z = c.dependent(1);
  const std::string &dy = c.first_derivative(0), &dz = c.first_derivative(1);
  const Expr &w1 = sys.omega1, &w2 = sys.omega2;
  auto d = [](const Expr& e, const std::string& v) { return differentiate(e, v); };
  ConditionReport r;
  r.add(decide("w1_" + y + " = w2_" + z, d(w1, y), d(w2, z)));
  r.add(decide("w1_" + z + " = -w2_" + y, d(w1, z), -d(w2, y)));
  r.add(decide("w1_" + dy + " = w2_" + dz, d(w1, dy), d(w2, dz)));
  r.add(decide("w1_" + dz + " = -w2_" + dy, d(w1, dz), -d(w2, dy)));
  return r;
}

ConditionReport check_cr_pair(const ExprPair& e, const VarContext& ctx, const std::string& label) {
  const std::string &y = ctx.dependent(0), &z = ctx.dependent(1);
  ConditionReport r;
  r.add(decide("Re " + label + "_" + y + " = Im " + label + "_" + z, differentiate(e.first, y),
               differentiate(e.second, z)));
  r.add(decide("Re " + label + "_" + z + " = -Im " + label + "_" + y, differentiate(e.first, z),
               -differentiate(e.second, y)));
  return r;
}

ComplexOde::ComplexOde(VarContext ctx, Expr re_omega, Expr im_omega)
    : ctx_(std::move(ctx)), re_(std::move(re_omega)), im_(std::move(im_omega)) {
  require(check_cr(OdeSystem2(ctx_, re_, im_)));
}

ComplexOde complexify(const OdeSystem2& sys) { return ComplexOde(sys.ctx, sys.omega1, sys.omega2); }

OdeSystem2 realify(const std::array<ExprPair, 4>& E, const VarContext& ctx) {
  for (int j = 0; j < 4; ++j) require(check_cr_pair(E[j], ctx, "E" + std::to_string(j)));
  // u' = p + i q; powers of u' split into real and imaginary parts
  const Expr p = symbol(ctx.first_derivative(0)), q = symbol(ctx.first_derivative(1));
  std::array<ExprPair, 4> pw{
      ExprPair{constant(1), constant(0)},
      ExprPair{p, q},
      ExprPair{p * p - q * q, constant(2) * p * q},
      ExprPair{p * p * p - constant(3) * p * q * q, constant(3) * p * p * q - q * q * q},
  };
  std::vector<Expr> re, im;
  for (int j = 0; j < 4; ++j) {
    const auto& [a, b] = E[j];
    re.push_back(a * pw[j].first - b * pw[j].second);
    im.push_back(b * pw[j].first + a * pw[j].second);
  }
  return OdeSystem2(ctx, simplify(-make_add(re)), simplify(-make_add(im)));
}

}  // namespace csa
