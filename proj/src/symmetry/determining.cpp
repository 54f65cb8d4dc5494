#include "csa/symmetry.hpp"

namespace csa {

std::string jet_name(int i, int k) { return "g" + std::to_string(i) + "_" + std::to_string(k); }

std::map<std::string, Expr> jet_chain(int order) {
  std::map<std::string, Expr> chain;
  for (int i = 1; i <= 9; ++i) {
    for (int k = 0; k < order; ++k) chain[jet_name(i, k)] = symbol(jet_name(i, k + 1));
  }
  return chain;
}

VectorField ansatz_field(Ansatz a, const VarContext& ctx) {
  const Expr y = symbol(ctx.dependent(0)), z = symbol(ctx.dependent(1));
  auto g = [](int i, int k = 0) { return symbol(jet_name(i, k)); };
  if (a == Ansatz::Quadratic) {
    return {simplify(g(1) * y + g(2) * z + g(3)),
            simplify(g(1, 1) * y * y + g(2, 1) * y * z + g(4) * y + g(5) * z + g(6)),
            simplify(g(1, 1) * y * z + g(2, 1) * z * z + g(7) * y + g(8) * z + g(9))};
  }
  const Expr half = constant(Rational(1, 2));
  const Expr c1 = symbol("c1"), c2 = symbol("c2"), c3 = symbol("c3"), c4 = symbol("c4");
  return {g(3), simplify((half * g(3, 1) + c3) * y + c1 * z + g(6)),
          simplify(c2 * y + (half * g(3, 1) + c4) * z + g(9))};
}

std::vector<std::pair<std::string, Expr>> DeterminingSystem::collected() const {
  std::vector<std::pair<std::string, Expr>> out;
  for (const auto& eq : equations) {
    auto terms = polynomial_terms(eq.residual, dependents);
    for (const auto& [exps, c] : terms) {
      if (zero_test(c).zero) continue;
      out.emplace_back(eq.group + " [" + print(monomial(dependents, exps)) + "]", c);
    }
  }
  return out;
}

DeterminingSystem determining_system_reduced(const Expr& beta, Ansatz a, const VarContext& ctx) {
  return determining_system_reduced(beta, differentiate(beta, ctx.independent()), a, ctx);
}

DeterminingSystem determining_system_reduced(const Expr& beta, const Expr& dbeta, Ansatz a, const VarContext& ctx) {
  const std::string x = ctx.independent(), yn = ctx.dependent(0), zn = ctx.dependent(1);
  const Expr y = symbol(yn), z = symbol(zn);
  const auto jets = jet_chain();
  auto dx = [&](const Expr& e) { return total_derivative(e, x, jets); };
  auto dy = [&](const Expr& e) { return differentiate(e, yn); };
  auto dz = [&](const Expr& e) { return differentiate(e, zn); };
  const VectorField V = ansatz_field(a, ctx);
  const Expr &xi = V.xi, &e1 = V.eta1, &e2 = V.eta2;
  const Expr b = beta, db = dbeta;
  const Expr two = constant(2), three = constant(3);

  DeterminingSystem s;
  s.source = DeterminingSystem::Source::Explicit;
  s.dependents = {yn, zn};
  auto add = [&](const std::string& group, const Expr& r) { s.equations.push_back({group, simplify(r)}); };
  add("cubic", dy(dy(xi)));
  add("cubic", dy(dz(xi)));
  add("cubic", dz(dz(xi)));
  add("cubic", dz(dz(e1)));
  add("cubic", dy(dy(e2)));
  add("quadratic", dy(dy(e1)) - two * dx(dy(xi)));
  add("quadratic", dy(dz(e1)) - dx(dz(xi)));
  add("quadratic", dy(dz(e2)) - dx(dy(xi)));
  add("quadratic", dz(dz(e2)) - two * dx(dz(xi)));
  add("first-order 1", dx(dx(xi)) - two * dx(dy(e1)) - three * b * dy(xi) * z + b * dz(xi) * y);
  add("first-order 1", dx(dz(e1)) + b * dz(xi) * z);
  add("first-order 2", dx(dx(xi)) - two * dx(dz(e2)) + three * b * dz(xi) * y - b * dy(xi) * z);
  add("first-order 2", dx(dy(e2)) - b * dy(xi) * y);
  add("zeroth-order 1", dx(dx(e1)) + b * (dz(e1) * y + two * dx(xi) * z - dy(e1) * z + e2) + db * z * xi);
  add("zeroth-order 2", dx(dx(e2)) + b * (dz(e2) * y - two * dx(xi) * y - dy(e2) * z - e1) - db * y * xi);
  return s;
}

DeterminingSystem determining_system_generated(const Expr& beta, Ansatz a, const VarContext& ctx) {
  const Expr y = symbol(ctx.dependent(0)), z = symbol(ctx.dependent(1));
  OdeSystem2 reduced(ctx, simplify(-(beta * z)), simplify(beta * y));
  auto [r1, r2] = prolong2_residuals(reduced, ansatz_field(a, ctx), jet_chain());
  DeterminingSystem s;
  s.source = DeterminingSystem::Source::Generated;
  s.dependents = {ctx.dependent(0), ctx.dependent(1)};
  const std::vector<std::string> d{ctx.first_derivative(0), ctx.first_derivative(1)};
  int n = 1;
  for (const Expr& r : {r1, r2}) {
    for (const auto& [exps, c] : polynomial_terms(r, d)) {
      s.equations.push_back({"R" + std::to_string(n) + " [" + print(monomial(d, exps)) + "]", c});
    }
    ++n;
  }
  return s;
}

}  // namespace csa
