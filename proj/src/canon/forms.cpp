#include "csa/canon.hpp"

#include <sstream>

namespace csa {

CoefficientFn::CoefficientFn(Expr e, std::string var)
    : value_(simplify(e)), var_(std::move(var)), derivative_(differentiate(e, var_)) {}

CoefficientFn::CoefficientFn(Tabulated t) : value_(std::move(t)), var_("x") {}

double CoefficientFn::operator()(double x) const {
  if (is_symbolic()) return eval(expr(), {{var_, x}});
  return table()(x);
}

double CoefficientFn::derivative(double x) const {
  if (is_symbolic()) return eval(derivative_, {{var_, x}});
  return table().derivative(x);
}

CoefficientFn CoefficientFn::differentiated() const {
  if (!is_symbolic()) throw std::logic_error("symbolic derivative of a tabulated coefficient");
  return CoefficientFn(derivative_, var_);
}

bool CoefficientFn::is_zero() const { return is_symbolic() && zero_test(expr()).zero; }

bool CoefficientFn::is_constant() const { return is_symbolic() && zero_test(derivative_).zero; }

std::string CoefficientFn::describe() const {
  if (is_symbolic()) return print(expr());
  std::ostringstream os;
  os << "tabulated[" << table().xs().size() << " points on " << table().lo() << ".." << table().hi() << "]";
  return os.str();
}

std::string to_string(FormKind k) {
  switch (k) {
    case FormKind::General: return "general";
    case FormKind::Optimal: return "optimal";
    case FormKind::FirstOrder: return "first-order";
    case FormKind::ZeroOrder: return "zero-order";
    case FormKind::Reduced: return "reduced";
  }
  return "?";
}

namespace {

LinearForm make_form(FormKind k, std::vector<CoefficientFn> c, std::size_t n, double lo, double hi) {
  if (c.size() != n) throw std::invalid_argument(to_string(k) + " form needs " + std::to_string(n) + " coefficients");
  if (!(lo < hi)) throw std::invalid_argument("interval must satisfy lo < hi");
  LinearForm f;
  f.kind = k;
  f.coefficients = std::move(c);
  f.lo = lo;
  f.hi = hi;
  return f;
}

Expr in_ctx(const CoefficientFn& c, const VarContext& ctx) {
  if (!c.is_symbolic()) throw std::logic_error("tabulated coefficient has no symbolic system");
  if (c.var() == ctx.independent()) return c.expr();
  return substitute(c.expr(), {{c.var(), symbol(ctx.independent())}});
}

}  // namespace

LinearForm LinearForm::general(std::vector<CoefficientFn> c, double lo, double hi) {
  return make_form(FormKind::General, std::move(c), 10, lo, hi);
}
LinearForm LinearForm::optimal(CoefficientFn d11, CoefficientFn d12, CoefficientFn d21, double lo, double hi) {
  return make_form(FormKind::Optimal, {std::move(d11), std::move(d12), std::move(d21)}, 3, lo, hi);
}
LinearForm LinearForm::first_order(CoefficientFn a1, CoefficientFn a2, double lo, double hi) {
  return make_form(FormKind::FirstOrder, {std::move(a1), std::move(a2)}, 2, lo, hi);
}
LinearForm LinearForm::zero_order(CoefficientFn a3, CoefficientFn a4, double lo, double hi) {
  return make_form(FormKind::ZeroOrder, {std::move(a3), std::move(a4)}, 2, lo, hi);
}
LinearForm LinearForm::reduced(CoefficientFn beta, double lo, double hi) {
  return make_form(FormKind::Reduced, {std::move(beta)}, 1, lo, hi);
}

bool LinearForm::is_symbolic() const {
  for (const auto& c : coefficients) {
    if (!c.is_symbolic()) return false;
  }
  return true;
}

OdeSystem2 LinearForm::to_system(const VarContext& ctx) const {
  const Expr y = symbol(ctx.dependent(0)), z = symbol(ctx.dependent(1));
  const Expr dy = symbol(ctx.first_derivative(0)), dz = symbol(ctx.first_derivative(1));
  auto c = [&](std::size_t i) { return in_ctx(coefficients.at(i), ctx); };
  Expr w1, w2;
  switch (kind) {
    case FormKind::General:
      w1 = c(0) * dy + c(1) * dz + c(4) * y + c(5) * z + c(8);
      w2 = c(2) * dy + c(3) * dz + c(6) * y + c(7) * z + c(9);
      break;
    case FormKind::Optimal:
      w1 = c(0) * y + c(1) * z;
      w2 = c(2) * y - c(0) * z;
      break;
    case FormKind::FirstOrder:
      w1 = c(0) * dy - c(1) * dz;
      w2 = c(1) * dy + c(0) * dz;
      break;
    case FormKind::ZeroOrder:
      w1 = c(0) * y - c(1) * z;
      w2 = c(1) * y + c(0) * z;
      break;
    case FormKind::Reduced:
      w1 = -(c(0) * z);
      w2 = c(0) * y;
      break;
  }
  return OdeSystem2(ctx, simplify(w1), simplify(w2));
}

State LinearForm::rhs(double x, const State& s) const {
  auto c = [&](std::size_t i) { return coefficients[i](x); };
  const double y = s[0], z = s[1], dy = s[2], dz = s[3];
  double w1 = 0, w2 = 0;
  switch (kind) {
    case FormKind::General:
      w1 = c(0) * dy + c(1) * dz + c(4) * y + c(5) * z + c(8);
      w2 = c(2) * dy + c(3) * dz + c(6) * y + c(7) * z + c(9);
      break;
    case FormKind::Optimal:
      w1 = c(0) * y + c(1) * z;
      w2 = c(2) * y - c(0) * z;
      break;
    case FormKind::FirstOrder:
      w1 = c(0) * dy - c(1) * dz;
      w2 = c(1) * dy + c(0) * dz;
      break;
    case FormKind::ZeroOrder:
      w1 = c(0) * y - c(1) * z;
      w2 = c(1) * y + c(0) * z;
      break;
    case FormKind::Reduced:
      w1 = -c(0) * z;
      w2 = c(0) * y;
      break;
  }
  return {dy, dz, w1, w2};
}

std::optional<LinearForm> identify_linear_form(const OdeSystem2& sys, double lo, double hi) {
  const VarContext& ctx = sys.ctx;
  std::vector<std::string> vars{ctx.first_derivative(0), ctx.first_derivative(1), ctx.dependent(0), ctx.dependent(1)};
  // per equation: coefficients of y', z', y, z, 1
  std::array<std::array<Expr, 5>, 2> k;
  for (int i = 0; i < 2; ++i) {
    k[i].fill(constant(0));
    std::vector<std::pair<std::vector<int>, Expr>> terms;
    try {
      terms = polynomial_terms(sys.omega(i), vars);
    } catch (const NotPolynomial&) {
      return std::nullopt;
    }
    for (const auto& [exps, c] : terms) {
      int deg = exps[0] + exps[1] + exps[2] + exps[3];
      if (deg > 1) return std::nullopt;
      int slot = 4;
      for (int j = 0; j < 4; ++j) {
        if (exps[j] == 1) slot = j;
      }
      k[i][slot] = c;
    }
  }
  auto zero = [](const Expr& e) { return zero_test(e).zero; };
  auto fn = [&](const Expr& e) { return CoefficientFn(e, ctx.independent()); };
  const bool no_first = zero(k[0][0]) && zero(k[0][1]) && zero(k[1][0]) && zero(k[1][1]);
  const bool no_zeroth = zero(k[0][2]) && zero(k[0][3]) && zero(k[1][2]) && zero(k[1][3]);
  const bool no_source = zero(k[0][4]) && zero(k[1][4]);
  if (no_source && no_first) {
    const bool cr = zero(k[0][2] - k[1][3]) && zero(k[0][3] + k[1][2]);
    if (cr && zero(k[0][2])) return LinearForm::reduced(fn(k[1][2]), lo, hi);
    if (cr) return LinearForm::zero_order(fn(k[0][2]), fn(k[1][2]), lo, hi);
    if (zero(k[0][2] + k[1][3])) return LinearForm::optimal(fn(k[0][2]), fn(k[0][3]), fn(k[1][2]), lo, hi);
  }
  if (no_source && no_zeroth && zero(k[0][0] - k[1][1]) && zero(k[0][1] + k[1][0])) {
    return LinearForm::first_order(fn(k[0][0]), fn(k[1][0]), lo, hi);
  }
  return LinearForm::general({fn(k[0][0]), fn(k[0][1]), fn(k[1][0]), fn(k[1][1]), fn(k[0][2]), fn(k[0][3]),
                              fn(k[1][2]), fn(k[1][3]), fn(k[0][4]), fn(k[1][4])},
                             lo, hi);
}

}  // namespace csa
