#include "csa/canon.hpp"

#include <cmath>
#include <complex>

namespace csa {

namespace {

using Fn = std::function<double(double)>;

Rescaling unit_rescaling(double lo, double hi) {
  Rescaling r;
  r.rho = Tabulated({lo, hi}, {1.0, 1.0}, {0.0, 0.0});
  r.rho.source = "rho'' = 0";
  r.new_x = Tabulated({lo, hi}, {lo, hi}, {1.0, 1.0});
  r.new_x.source = "identity";
  r.old_x = r.new_x;
  return r;
}

RkResult integrate_rho(const Fn& q, double lo, double hi, double h) {
  Rhs f = [&](double t, const State& s) { return State{s[1], q(t) * s[0], 1.0 / (s[0] * s[0])}; };
  return rk4(f, lo, {1.0, 0.0, lo}, hi, h);
}

// rho'' = q rho, rho(lo) = 1, rho'(lo) = 0, and x~ = lo + int_lo^t rho^-2
Rescaling rescale(const Fn& q, double lo, double hi, double h, const std::string& source) {
  // rho may vanish inside a step before 1/rho^2 blows up; scan the coarse run first
  Rhs f = [&](double t, const State& s) { return State{s[1], q(t) * s[0]}; };
  RkResult scan = rk4(f, lo, {1.0, 0.0}, hi, h);
  for (std::size_t i = 1; i < scan.xs.size(); ++i) {
    if (scan.states[i][0] <= 0.0) {
      double t0 = scan.xs[i - 1], t1 = scan.xs[i];
      double r0 = scan.states[i - 1][0], r1 = scan.states[i][0];
      double where = t0 + (t1 - t0) * r0 / (r0 - r1);
      throw RhoVanishes("rho vanishes at t=" + std::to_string(where) + "; the safe interval is [" +
                            std::to_string(lo) + ", " + std::to_string(where) + ")",
                        where);
    }
  }
  RkResult run = integrate_rho(q, lo, hi, h);
  RkResult fine = integrate_rho(q, lo, hi, h / 2);
  Rescaling r;
  std::vector<double> rho, drho, nx, dnx;
  for (const auto& s : run.states) {
    rho.push_back(s[0]);
    drho.push_back(s[1]);
    nx.push_back(s[2]);
    dnx.push_back(1.0 / (s[0] * s[0]));
  }
  double err = 0, err_x = 0;
  for (std::size_t i = 0; i < run.xs.size(); ++i) {
    // fine nodes 2i coincide with coarse nodes i except possibly the last one
    std::size_t j = std::min(2 * i, fine.xs.size() - 1);
    if (std::fabs(fine.xs[j] - run.xs[i]) > 1e-12) continue;
    err = std::max(err, std::fabs(fine.states[j][0] - run.states[i][0]));
    err_x = std::max(err_x, std::fabs(fine.states[j][2] - run.states[i][2]));
  }
  r.rho = Tabulated(run.xs, rho, drho);
  r.rho.source = source;
  r.rho.step = h;
  r.rho.error_estimate = err;
  r.new_x = Tabulated(run.xs, nx, dnx);
  r.new_x.source = "x~' = rho^-2";
  r.new_x.step = h;
  r.new_x.error_estimate = err_x;
  std::vector<double> drho2;
  for (double v : rho) drho2.push_back(v * v);
  r.old_x = Tabulated(nx, run.xs, drho2);
  r.old_x.source = "inverse of x~";
  r.old_x.step = h;
  r.old_x.error_estimate = err_x;
  r.halfstep_error = err;
  return r;
}

// f(t) rho^4 expressed on the x~ grid, with d/dx~ = rho^2 d/dt
CoefficientFn rescaled(const Rescaling& s, const CoefficientFn& f, const std::string& name) {
  const auto& ts = s.rho.xs();
  std::vector<double> xs, ys, dys;
  for (std::size_t i = 0; i < ts.size(); ++i) {
    double r = s.rho.ys()[i], dr = s.rho.dys()[i];
    double v = f(ts[i]), dv = f.derivative(ts[i]);
    xs.push_back(s.new_x.ys()[i]);
    ys.push_back(std::pow(r, 4) * v);
    dys.push_back(r * r * (4 * r * r * r * dr * v + std::pow(r, 4) * dv));
  }
  Tabulated t(xs, ys, dys);
  t.source = name + " = rho^4 * (" + f.describe() + ")";
  t.step = s.rho.step;
  t.error_estimate = s.halfstep_error * 4;
  return CoefficientFn(std::move(t));
}

double norm2(double a, double b) { return a * a + b * b; }

}  // namespace

OptimalReduction reduce_optimal(const LinearForm& g, double h) {
  if (g.kind != FormKind::General) throw std::invalid_argument("reduce_optimal expects a general form");
  for (std::size_t i : {0u, 1u, 2u, 3u, 8u, 9u}) {
    if (!g.coefficients[i].is_zero()) {
      throw std::invalid_argument("input must be of the form u'' = D u (first-derivative and source terms zero)");
    }
  }
  const CoefficientFn &d11 = g.coefficients[4], &d12 = g.coefficients[5], &d21 = g.coefficients[6],
                      &d22 = g.coefficients[7];
  OptimalReduction out;
  if (d11.is_symbolic() && d22.is_symbolic() && d12.is_symbolic() && d21.is_symbolic()) {
    Expr trace = simplify(d11.expr() + d22.expr());
    if (zero_test(trace).zero) {
      const std::string& v = d11.var();
      out.optimal = LinearForm::optimal(CoefficientFn(make_div(d11.expr() - d22.expr(), constant(2)), v), d12, d21,
                                        g.lo, g.hi);
      out.scaling = unit_rescaling(g.lo, g.hi);
      return out;
    }
  }
  Fn q = [&](double t) { return (d11(t) + d22(t)) / 2; };
  out.scaling = rescale(q, g.lo, g.hi, h, "rho'' = ((d11 + d22)/2) rho");
  // (d11 - d22)/2 as a coefficient function for the rescaling helper
  std::vector<double> ts = out.scaling.rho.xs(), hv, dhv;
  for (double t : ts) {
    hv.push_back((d11(t) - d22(t)) / 2);
    dhv.push_back((d11.derivative(t) - d22.derivative(t)) / 2);
  }
  CoefficientFn half(Tabulated(ts, hv, dhv));
  const auto& nx = out.scaling.new_x.ys();
  out.optimal = LinearForm::optimal(rescaled(out.scaling, half, "d~11"), rescaled(out.scaling, d12, "d~12"),
                                    rescaled(out.scaling, d21, "d~21"), nx.front(), nx.back());
  return out;
}

ReducedReduction reduce_zero_order(const LinearForm& f, double h) {
  if (f.kind != FormKind::ZeroOrder) throw std::invalid_argument("reduce_zero_order expects a zero-order form");
  const CoefficientFn &a3 = f.coefficients[0], &a4 = f.coefficients[1];
  ReducedReduction out;
  if (a3.is_zero()) {
    out.reduced = LinearForm::reduced(a4, f.lo, f.hi);
    out.scaling = unit_rescaling(f.lo, f.hi);
    return out;
  }
  Fn q = [&](double t) { return a3(t); };
  out.scaling = rescale(q, f.lo, f.hi, h, "rho'' = (" + a3.describe() + ") rho");
  const auto& nx = out.scaling.new_x.ys();
  out.reduced = LinearForm::reduced(rescaled(out.scaling, a4, "beta"), nx.front(), nx.back());
  return out;
}

std::pair<double, State> ReducedReduction::to_reduced(double t, const State& s) const {
  double r = scaling.rho(t), dr = scaling.rho.derivative(t);
  return {scaling.new_x(t), {s[0] / r, s[1] / r, r * s[2] - dr * s[0], r * s[3] - dr * s[1]}};
}

std::pair<double, State> ReducedReduction::from_reduced(double xt, const State& S) const {
  const double t = scaling.old_x(xt);
  double r = scaling.rho(t), dr = scaling.rho.derivative(t);
  double y = r * S[0], z = r * S[1];
  return {t, {y, z, (S[2] + dr * y) / r, (S[3] + dr * z) / r}};
}

ZeroOrderReduction reduce_first_order(const LinearForm& f, double h) {
  if (f.kind != FormKind::FirstOrder) throw std::invalid_argument("reduce_first_order expects a first-order form");
  const CoefficientFn &a1 = f.coefficients[0], &a2 = f.coefficients[1];
  Rhs rhs = [&](double x, const State& m) {
    double p = a1(x), q = a2(x);
    return State{(p * m[0] - q * m[1]) / 2, (p * m[1] + q * m[0]) / 2};
  };
  RkResult run = rk4(rhs, f.lo, {1.0, 0.0}, f.hi, h);
  RkResult fine = rk4(rhs, f.lo, {1.0, 0.0}, f.hi, h / 2);
  double err = 0;
  for (std::size_t i = 0; i < run.xs.size(); ++i) {
    std::size_t j = std::min(2 * i, fine.xs.size() - 1);
    if (std::fabs(fine.xs[j] - run.xs[i]) > 1e-12) continue;
    err = std::max(err, std::hypot(fine.states[j][0] - run.states[i][0], fine.states[j][1] - run.states[i][1]));
  }

  ZeroOrderReduction out;
  std::vector<double> m1, m2, dm1, dm2, a3v, a4v;
  for (std::size_t i = 0; i < run.xs.size(); ++i) {
    double x = run.xs[i], M1 = run.states[i][0], M2 = run.states[i][1];
    double n2 = norm2(M1, M2);
    if (n2 < 1e-12) throw MDegenerate("M1^2 + M2^2 vanishes at x=" + std::to_string(x), x);
    State d = rhs(x, run.states[i]);
    double p = a1(x), q = a2(x), dp = a1.derivative(x), dq = a2.derivative(x);
    // 2 M'' = zeta' M + zeta M'
    double dd1 = (dp * M1 - dq * M2 + p * d[0] - q * d[1]) / 2;
    double dd2 = (dp * M2 + dq * M1 + p * d[1] + q * d[0]) / 2;
    double u = p * d[0] - q * d[1] - dd1;  // real part of zeta M' - M''
    double v = p * d[1] + q * d[0] - dd2;  // imaginary part
    m1.push_back(M1);
    m2.push_back(M2);
    dm1.push_back(d[0]);
    dm2.push_back(d[1]);
    a3v.push_back((M1 * u + M2 * v) / n2);
    a4v.push_back((M1 * v - M2 * u) / n2);
  }
  out.M1 = Tabulated(run.xs, m1, dm1);
  out.M2 = Tabulated(run.xs, m2, dm2);
  for (Tabulated* t : {&out.M1, &out.M2}) {
    t->source = "2 M' = (a1 + i a2) M";
    t->step = h;
    t->error_estimate = err;
  }
  Tabulated t3(run.xs, a3v), t4(run.xs, a4v);
  t3.source = "a3 from M";
  t4.source = "a4 from M";
  t3.step = t4.step = h;
  out.from_tables = LinearForm::zero_order(CoefficientFn(t3), CoefficientFn(t4), f.lo, f.hi);

  if (f.is_symbolic()) {
    // (a3 + i a4) = zeta^2/4 - zeta'/2
    const Expr &p = a1.expr(), &q = a2.expr();
    const std::string& v = a1.var();
    Expr p2 = a2.var() == v ? q : substitute(q, {{a2.var(), symbol(v)}});
    Expr e3 = simplify((p * p - p2 * p2) / constant(4) - differentiate(p, v) / constant(2));
    Expr e4 = simplify(p * p2 / constant(2) - differentiate(p2, v) / constant(2));
    out.zero_order = LinearForm::zero_order(CoefficientFn(e3, v), CoefficientFn(e4, v), f.lo, f.hi);
    for (std::size_t i = 0; i < run.xs.size(); ++i) {
      double x = run.xs[i];
      out.table_deviation = std::max(out.table_deviation, std::fabs(out.zero_order.coefficients[0](x) - a3v[i]));
      out.table_deviation = std::max(out.table_deviation, std::fabs(out.zero_order.coefficients[1](x) - a4v[i]));
    }
  } else {
    out.zero_order = out.from_tables;
  }
  return out;
}

State ZeroOrderReduction::to_zero_order(double x, const State& s) const {
  std::complex<double> M(M1(x), M2(x)), dM(M1.derivative(x), M2.derivative(x));
  std::complex<double> u(s[0], s[1]), du(s[2], s[3]);
  std::complex<double> w = u / M, dw = (du - dM * w) / M;
  return {w.real(), w.imag(), dw.real(), dw.imag()};
}

State ZeroOrderReduction::from_zero_order(double x, const State& s) const {
  std::complex<double> M(M1(x), M2(x)), dM(M1.derivative(x), M2.derivative(x));
  std::complex<double> w(s[0], s[1]), dw(s[2], s[3]);
  std::complex<double> u = M * w, du = dM * w + M * dw;
  return {u.real(), u.imag(), du.real(), du.imag()};
}

}  // namespace csa
