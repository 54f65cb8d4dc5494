#include "csa/verify.hpp"

#include <cmath>
#include <sstream>

namespace csa {

namespace {

constexpr double kMinSpacing = 1e-2;

Bindings jet_bindings(const VarContext& ctx, double x, const State& s, const Bindings& params) {
  Bindings b = params;
  b[ctx.independent()] = x;
  b[ctx.dependent(0)] = s[0];
  b[ctx.dependent(1)] = s[1];
  b[ctx.first_derivative(0)] = s[2];
  b[ctx.first_derivative(1)] = s[3];
  return b;
}

RkResult run(const OdeSystem2& sys, const std::array<double, 5>& init, double x_end, double h, const Bindings& params) {
  Rhs f = [&](double x, const State& s) {
    Bindings b = jet_bindings(sys.ctx, x, s, params);
    double w1, w2;
    try {
      w1 = eval(sys.omega1, b);
      w2 = eval(sys.omega2, b);
    } catch (const EvalError& e) {
      throw DomainError(std::string("right-hand side not defined at x=") + std::to_string(x) + ": " + e.what(), x);
    }
    if (!std::isfinite(w1) || !std::isfinite(w2)) throw DomainError("right-hand side not finite at x=" + std::to_string(x), x);
    return State{s[2], s[3], w1, w2};
  };
  return rk4(f, init[0], State{init[1], init[2], init[3], init[4]}, x_end, h);
}

// first total derivative without second-order substitution
Expr total1(const Expr& e, const VarContext& ctx) {
  return simplify(differentiate(e, ctx.independent()) +
                  differentiate(e, ctx.dependent(0)) * symbol(ctx.first_derivative(0)) +
                  differentiate(e, ctx.dependent(1)) * symbol(ctx.first_derivative(1)));
}

// f''(t1) from a quintic matching values and slopes at t0 < t1 < t2 (or reversed)
double second_derivative(const double t[3], const double f[3], const double d[3]) {
  const double scale = 0.5 * (t[2] - t[0]);
  Eigen::Matrix<double, 6, 6> A;
  Eigen::Matrix<double, 6, 1> rhs;
  for (int i = 0; i < 3; ++i) {
    const double s = (t[i] - t[1]) / scale;
    for (int k = 0; k < 6; ++k) {
      A(2 * i, k) = std::pow(s, k);
      A(2 * i + 1, k) = k == 0 ? 0.0 : k * std::pow(s, k - 1);
    }
    rhs(2 * i) = f[i];
    rhs(2 * i + 1) = d[i] * scale;
  }
  Eigen::Matrix<double, 6, 1> a = A.fullPivLu().solve(rhs);
  return 2.0 * a(2) / (scale * scale);
}

Expr freeze(const Expr& e, const Bindings& params) {
  std::map<std::string, Expr> rep;
  for (const auto& [k, v] : params) rep[k] = constant(rational_from_double(v));
  return simplify(substitute(e, rep));
}

OdeSystem2 freeze(const OdeSystem2& s, const Bindings& params) {
  return OdeSystem2(s.ctx, freeze(s.omega1, params), freeze(s.omega2, params));
}

}  // namespace

Trajectory integrate(const OdeSystem2& sys, const std::array<double, 5>& init, double x_end, double h,
                     const Bindings& params) {
  if (!(h > 0)) throw std::invalid_argument("step must be positive");
  if (!(x_end > init[0])) throw std::invalid_argument("x_end must exceed x0");
  RkResult coarse = run(sys, init, x_end, h, params);
  RkResult fine = run(sys, init, x_end, h / 2, params);
  double err = 0;
  // every other fine node coincides with a coarse node except possibly the shortened last step
  for (std::size_t i = 0; i < coarse.xs.size(); ++i) {
    const std::size_t j = std::min(2 * i, fine.xs.size() - 1);
    if (std::fabs(fine.xs[j] - coarse.xs[i]) > 1e-12) continue;
    for (int k = 0; k < 4; ++k) err = std::max(err, std::fabs(coarse.states[i][k] - fine.states[j][k]));
  }
  for (const auto& s : coarse.states) {
    for (double v : s) {
      if (!std::isfinite(v)) throw IntegrationError("trajectory is not finite");
    }
  }
  if (err > 1e-7) {
    std::ostringstream os;
    os << "step-halving check failed: max difference " << err << " > 1e-7 (h=" << h << ")";
    throw IntegrationError(os.str());
  }
  return Trajectory{std::move(coarse.xs), std::move(coarse.states), sys, h, err};
}

double residual_on_trajectory(const Trajectory& traj, const OdeSystem2& target, const PointTransformation& T,
                              const Bindings& params) {
  const VarContext& sc = traj.generator.ctx;
  const std::size_t n = traj.xs.size();
  if (n < 9) throw std::invalid_argument("trajectory too short for residual estimation");
  const Expr dX = total1(T.X, sc), dY = total1(T.Y, sc), dZ = total1(T.Z, sc);
  std::vector<double> X(n), Y(n), Z(n), Y1(n), Z1(n);
  for (std::size_t i = 0; i < n; ++i) {
    Bindings b = jet_bindings(sc, traj.xs[i], traj.states[i], params);
    try {
      X[i] = eval(T.X, b);
      Y[i] = eval(T.Y, b);
      Z[i] = eval(T.Z, b);
      const double dx = eval(dX, b);
      if (dx == 0) throw NonMonotone("d(X)/dx vanishes on the trajectory", traj.xs[i]);
      Y1[i] = eval(dY, b) / dx;
      Z1[i] = eval(dZ, b) / dx;
    } catch (const EvalError& e) {
      throw DomainError(std::string("transformation not defined on the trajectory: ") + e.what(), traj.xs[i]);
    }
  }
  const double dir = X[1] > X[0] ? 1.0 : -1.0;
  for (std::size_t i = 1; i < n; ++i) {
    if (!(dir * (X[i] - X[i - 1]) > 0)) throw NonMonotone("new independent variable is not strictly monotone", traj.xs[i]);
  }
  const VarContext& tc = target.ctx;
  // stencil nodes at least kMinSpacing apart so rounding (~eps / spacing^2)
  // stays below the integration error
  const std::size_t k = std::max<std::size_t>(1, static_cast<std::size_t>(std::lround(kMinSpacing / traj.step)));
  if (n < 2 * k + 7) throw std::invalid_argument("trajectory too short for residual estimation");
  double worst = 0;
  for (std::size_t i = std::max<std::size_t>(3, k); i + std::max<std::size_t>(3, k) < n; ++i) {
    const double t[3] = {X[i - k], X[i], X[i + k]};
    const double fy[3] = {Y[i - k], Y[i], Y[i + k]}, dy[3] = {Y1[i - k], Y1[i], Y1[i + k]};
    const double fz[3] = {Z[i - k], Z[i], Z[i + k]}, dz[3] = {Z1[i - k], Z1[i], Z1[i + k]};
    const double Y2 = second_derivative(t, fy, dy), Z2 = second_derivative(t, fz, dz);
    Bindings b = jet_bindings(tc, X[i], State{Y[i], Z[i], Y1[i], Z1[i]}, params);
    double w1, w2;
    try {
      w1 = eval(target.omega1, b);
      w2 = eval(target.omega2, b);
    } catch (const EvalError& e) {
      throw DomainError(std::string("target not defined on the mapped trajectory: ") + e.what(), traj.xs[i]);
    }
    worst = std::max(worst, std::fabs(Y2 - w1) + std::fabs(Z2 - w2));
  }
  return worst;
}

RkResult integrate_complex(const ComplexRhs& w, const std::array<double, 5>& init, double x_end, double h) {
  Rhs f = [&](double x, const State& s) {
    std::complex<double> u(s[0], s[1]), du(s[2], s[3]);
    std::complex<double> d2 = w(x, u, du);
    if (!std::isfinite(d2.real()) || !std::isfinite(d2.imag())) throw DomainError("complex right-hand side not finite", x);
    return State{s[2], s[3], d2.real(), d2.imag()};
  };
  return rk4(f, init[0], State{init[1], init[2], init[3], init[4]}, x_end, h);
}

ExampleCase example_case(int id) {
  using C = std::complex<double>;
  const VarContext sctx = VarContext::standard({"c1", "c2"});
  const VarContext tctx("X", {"Y", "Z"}, {"c1", "c2"});
  auto S = [&](const std::string& a, const std::string& b) { return parse_system(a, b, sctx); };
  auto Tg = [&](const std::string& a, const std::string& b) { return parse_system(a, b, tctx); };
  auto P = [&](const std::string& s) { return parse(s, sctx); };
  const PointTransformation polar{P("x"), P("exp(y)*cos(z)"), P("exp(y)*sin(z)")};
  const Bindings c11{{"c1", 1.0}, {"c2", 1.0}};
  const C c(1.0, 1.0);
  switch (id) {
    case 1:
      return {1,
              "nonlinear system linearizable to the free particle",
              S("-(y'^2)+z'^2-(2/x)*y'", "-2*y'*z'-(2/x)*z'"),
              {P("1/x"), P("exp(y)*cos(z)"), P("exp(y)*sin(z)")},
              tctx,
              Tg("0", "0"),
              {},
              {1.0, 0.0, 0.0, 0.1, 0.1},
              2.0,
              [](double x, C, C du) { return -du * du - (2.0 / x) * du; },
              15,
              false};
    case 2:
      return {2,
              "constant first-derivative coefficients",
              S("-(y'^2)+z'^2+c1*y'-c2*z'", "-2*y'*z'+c2*y'+c1*z'"),
              polar,
              tctx,
              Tg("c1*Y'-c2*Z'", "c2*Y'+c1*Z'"),
              c11,
              {0.0, 0.0, 0.0, 0.1, 0.1},
              1.0,
              [c](double, C, C du) { return -du * du + c * du; },
              7,
              false};
    case 3:
      return {3,
              "x-dependent first-derivative coefficients",
              S("-(y'^2)+z'^2+(1+x)*(c1*y'-c2*z')", "-2*y'*z'+(1+x)*(c2*y'+c1*z')"),
              polar,
              tctx,
              Tg("(1+X)*(c1*Y'-c2*Z')", "(1+X)*(c2*Y'+c1*Z')"),
              c11,
              {0.0, 0.0, 0.0, 0.1, 0.1},
              1.0,
              [c](double x, C, C du) { return -du * du + (1.0 + x) * c * du; },
              6,
              false};
    case 4:
      return {4,
              "constant forcing",
              S("-(y'^2)+z'^2+c1", "-2*y'*z'+c2"),
              polar,
              tctx,
              Tg("c1*Y-c2*Z", "c2*Y+c1*Z"),
              c11,
              {0.0, 0.0, 0.0, 0.1, 0.1},
              1.0,
              [c](double, C, C du) { return -du * du + c; },
              7,
              true};
    default:
      throw std::invalid_argument("example id must be 1..4, got " + std::to_string(id));
  }
}

bool CaseReport::passed() const { return first_failure() == nullptr; }

const StageResult* CaseReport::first_failure() const {
  for (const auto& s : stages) {
    if (!s.passed) return &s;
  }
  return nullptr;
}

namespace {

void add(CaseReport& r, std::string stage, bool ok, std::string detail) {
  r.stages.push_back({std::move(stage), ok, std::move(detail)});
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(3);
  os << v;
  return os.str();
}

// target -> reduced form -> classification; the chain is recorded in r
Classification classify_target(const OdeSystem2& target, double lo, double hi, CaseReport& r) {
  auto form = identify_linear_form(target, lo, hi);
  if (!form) throw std::runtime_error("target is not one of the linear normal forms");
  std::string chain = to_string(form->kind);
  LinearForm f = *form;
  if (f.kind == FormKind::FirstOrder) {
    f = reduce_first_order(f).zero_order;
    chain += " -> " + to_string(f.kind);
  }
  if (f.kind == FormKind::ZeroOrder) {
    f = reduce_zero_order(f).reduced;
    chain += " -> " + to_string(f.kind);
  }
  if (f.kind != FormKind::Reduced) throw std::runtime_error("no reduction path from " + to_string(f.kind));
  chain += std::string(" (beta ") + (f.coefficients[0].is_symbolic() ? f.coefficients[0].describe() : "tabulated") + ")";
  r.reduction_chain = chain;
  return classify_beta(f.coefficients[0], f.lo, f.hi);
}

}  // namespace

CaseReport run_example(int id, std::uint64_t seed) {
  const std::uint64_t saved = default_sample_seed();
  set_default_sample_seed(seed);
  struct Restore {
    std::uint64_t s;
    ~Restore() { set_default_sample_seed(s); }
  } restore{saved};
  ExampleCase ex = example_case(id);
  CaseReport r;
  r.id = id;
  r.title = ex.title;
  r.expected_dimension = ex.expected_dimension;
  r.dimension_inferred = ex.dimension_inferred;

  auto cr = check_cr(ex.system);
  const Condition* cf = cr.first_failure();
  add(r, "Cauchy-Riemann conditions", cr.holds, cf ? "fails: " + cf->name : "all four hold");

  auto t2 = check_cubic_correspondence(extract_cubic(ex.system));
  const Condition* tf = t2.report.first_failure();
  add(r, "complex-linearizable cubic form", t2.report.holds, tf ? "fails: " + tf->name : "coefficient conditions hold");

  try {
    auto tr = transform_system(ex.system, ex.transformation, ex.target_ctx);
    auto m = match_target(tr, ex.expected_target, ex.transformation, ex.system.ctx);
    const Condition* mf = m.first_failure();
    add(r, "symbolic target", m.holds, mf ? "differs: " + mf->name : "matches the expected target");
  } catch (const std::exception& e) {
    add(r, "symbolic target", false, e.what());
  }

  try {
    Trajectory traj = integrate(ex.system, ex.init, ex.x_end, 1e-3, ex.parameters);
    r.trajectory_residual = residual_on_trajectory(traj, freeze(ex.expected_target, ex.parameters),
                                                   ex.transformation, ex.parameters);
    add(r, "trajectory residual", r.trajectory_residual <= 1e-5, fmt(r.trajectory_residual) + " (bound 1e-5)");

    RkResult cx = integrate_complex(ex.complex_rhs, ex.init, ex.x_end, 1e-3);
    double dev = 0;
    for (std::size_t i = 0; i < std::min(cx.states.size(), traj.states.size()); ++i) {
      for (int k = 0; k < 4; ++k) dev = std::max(dev, std::fabs(cx.states[i][k] - traj.states[i][k]));
    }
    if (cx.states.size() != traj.states.size()) dev = INFINITY;
    r.complex_route_deviation = dev;
    add(r, "complex route", dev <= 1e-7, fmt(dev) + " (bound 1e-7)");
  } catch (const std::exception& e) {
    add(r, "trajectory residual", false, e.what());
  }

  try {
    // working interval of the target's independent variable
    Bindings b0 = jet_bindings(ex.system.ctx, ex.init[0], State{ex.init[1], ex.init[2], ex.init[3], ex.init[4]}, {});
    Bindings b1 = b0;
    b1[ex.system.ctx.independent()] = ex.x_end;
    double X0 = eval(ex.transformation.X, b0), X1 = eval(ex.transformation.X, b1);
    Classification c = classify_target(freeze(ex.expected_target, ex.parameters), std::min(X0, X1), std::max(X0, X1), r);
    r.dimension = c.dimension;
    std::string got = c.dimension ? std::to_string(*c.dimension) : "unknown";
    if (ex.dimension_inferred) {
      add(r, "symmetry dimension", c.dimension.has_value(),
          got + " via " + r.reduction_chain + "; expected " + std::to_string(*ex.expected_dimension) +
              " is inferred, not quoted (" + (c.dimension == ex.expected_dimension ? "agrees" : "disagrees") + ")");
    } else {
      add(r, "symmetry dimension", c.dimension == ex.expected_dimension,
          got + " via " + r.reduction_chain + "; expected " + std::to_string(*ex.expected_dimension));
    }
  } catch (const std::exception& e) {
    add(r, "symmetry dimension", false, e.what());
  }
  return r;
}

}  // namespace csa
