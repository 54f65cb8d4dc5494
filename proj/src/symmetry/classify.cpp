#include "csa/symmetry.hpp"

#include <cmath>

namespace csa {

namespace {

const std::vector<std::string> kUnknowns{"g3_0", "g3_1", "g3_2", "g6_0", "g6_1", "g9_0", "g9_1", "c1", "c2", "c3", "c4"};
const std::vector<std::string> kTops{"g3_3", "g6_2", "g9_2"};
constexpr int kN = 11;
const std::vector<int> kTranslationColumns{3, 4, 5, 6};

// derivative of unknown j: another unknown (>= 0), a top jet (-1 - t), or zero (kN)
const int kDerivative[kN] = {1, 2, -1, 4, -2, 6, -3, kN, kN, kN, kN};

// stand-ins for a tabulated beta and its derivative
const std::string kBeta = "beta#", kDBeta = "dbeta#";

struct LinearResidual {
  std::string name;
  std::vector<Expr> a;  // coefficients of the unknowns
  std::vector<Expr> b;  // coefficients of the top jets
};

LinearResidual linearize(const std::string& name, const Expr& r, const std::string& x) {
  LinearResidual lr{name, {}, {}};
  Expr rest = r;
  for (const auto& u : kUnknowns) {
    Expr c = differentiate(r, u);
    lr.a.push_back(c);
    rest = rest - c * symbol(u);
  }
  for (const auto& t : kTops) {
    Expr c = differentiate(r, t);
    lr.b.push_back(c);
    rest = rest - c * symbol(t);
  }
  if (!zero_test(rest).zero) throw std::logic_error("determining residual is not linear in the unknowns: " + name);
  for (const auto& c : lr.a) {
    for (const auto& s : free_symbols(c)) {
      if (s != x && s != kBeta && s != kDBeta) throw std::logic_error("coefficient depends on " + s + " in " + name);
    }
  }
  return lr;
}

struct Model {
  std::vector<LinearResidual> odes;  // odes[t] determines kTops[t]
  std::vector<LinearResidual> algebraic;
  std::string x;
  std::function<void(double, Bindings&)> extra;

  Bindings bindings(double xv) const {
    Bindings b{{x, xv}};
    if (extra) extra(xv, b);
    return b;
  }

  // top jets as linear functions of the unknowns: T = L q
  Eigen::Matrix<double, 3, kN> tops(double xv) const {
    Bindings bind = bindings(xv);
    Eigen::Matrix3d B;
    Eigen::Matrix<double, 3, kN> A;
    for (int t = 0; t < 3; ++t) {
      for (int j = 0; j < kN; ++j) A(t, j) = eval(odes[t].a[j], bind);
      for (int s = 0; s < 3; ++s) B(t, s) = eval(odes[t].b[s], bind);
    }
    return -B.partialPivLu().solve(A);
  }

  Eigen::Matrix<double, kN, kN> flow(double xv) const {
    Eigen::Matrix<double, kN, kN> F = Eigen::Matrix<double, kN, kN>::Zero();
    auto L = tops(xv);
    for (int j = 0; j < kN; ++j) {
      int d = kDerivative[j];
      if (d == kN) continue;
      if (d >= 0) F(j, d) = 1;
      else F.row(j) = L.row(-1 - d);
    }
    return F;
  }

  Eigen::RowVectorXd row(const LinearResidual& r, double xv) const {
    Bindings bind = bindings(xv);
    Eigen::RowVectorXd v(kN);
    for (int j = 0; j < kN; ++j) v(j) = eval(r.a[j], bind);
    auto L = tops(xv);
    for (int t = 0; t < 3; ++t) v += eval(r.b[t], bind) * L.row(t);
    return v;
  }
};

Model build_model(const Expr& beta, const Expr& dbeta, const VarContext& ctx) {
  Model m;
  m.x = ctx.independent();
  auto sys = determining_system_reduced(beta, dbeta, Ansatz::Linear, ctx);
  std::vector<LinearResidual> all;
  for (const auto& [name, c] : sys.collected()) all.push_back(linearize(name, c, m.x));
  m.odes.resize(3);
  std::vector<bool> assigned(3, false);
  for (auto& r : all) {
    int top = -1, count = 0;
    for (int t = 0; t < 3; ++t) {
      if (!zero_test(r.b[t]).zero) {
        top = t;
        ++count;
      }
    }
    if (count == 1 && !assigned[static_cast<std::size_t>(top)]) {
      m.odes[static_cast<std::size_t>(top)] = r;
      assigned[static_cast<std::size_t>(top)] = true;
    } else {
      m.algebraic.push_back(r);
    }
  }
  for (int t = 0; t < 3; ++t) {
    if (!assigned[static_cast<std::size_t>(t)]) throw std::logic_error("no evolution equation for " + kTops[t]);
  }
  return m;
}

void check_width(double lo, double hi) {
  if (!(hi - lo >= 1e-2)) {
    throw IntervalTooSmall("interval [" + std::to_string(lo) + ", " + std::to_string(hi) +
                           "] is too small for collocation (need hi - lo >= 0.01)");
  }
}

void check_interval(const Expr& beta, const std::string& x, double lo, double hi) {
  check_width(lo, hi);
  const int n = 2000;
  for (int i = 0; i <= n; ++i) {
    double xv = lo + (hi - lo) * i / n;
    double v;
    try {
      v = eval(beta, {{x, xv}});
    } catch (const EvalError&) {
      throw PoleInInterval("beta is not defined at x=" + std::to_string(xv), xv);
    }
    if (!std::isfinite(v) || std::fabs(v) > 1e10) throw PoleInInterval("beta has a pole near x=" + std::to_string(xv), xv);
  }
}

OdeSystem2 reduced_system(const Expr& beta, const VarContext& ctx) {
  const Expr y = symbol(ctx.dependent(0)), z = symbol(ctx.dependent(1));
  return OdeSystem2(ctx, simplify(-(beta * z)), simplify(beta * y));
}

// closed-form point fields from null vectors with g6 = g9 = 0
std::vector<VectorField> linear_witnesses(const Eigen::MatrixXd& A, double rel_tol, double lo, const Expr& beta,
                                          const VarContext& ctx) {
  std::vector<int> keep;
  for (int j = 0; j < kN; ++j) {
    if (std::find(kTranslationColumns.begin(), kTranslationColumns.end(), j) == kTranslationColumns.end()) keep.push_back(j);
  }
  Eigen::MatrixXd sub(A.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) sub.col(static_cast<Eigen::Index>(k)) = A.col(keep[k]);
  Eigen::MatrixXd N = null_space(sub, rel_tol).transpose();  // rows span the null space

  // reduced row echelon form for readable generators
  Eigen::Index r0 = 0;
  for (Eigen::Index col = 0; col < N.cols() && r0 < N.rows(); ++col) {
    Eigen::Index piv;
    double best = N.col(col).segment(r0, N.rows() - r0).cwiseAbs().maxCoeff(&piv);
    if (best < 1e-9) continue;
    N.row(r0).swap(N.row(piv + r0));
    N.row(r0) /= N(r0, col);
    for (Eigen::Index i = 0; i < N.rows(); ++i) {
      if (i != r0) N.row(i) -= N(i, col) * N.row(r0);
    }
    ++r0;
  }

  const Expr x = symbol(ctx.independent()), y = symbol(ctx.dependent(0)), z = symbol(ctx.dependent(1));
  const Expr x0 = constant(rational_from_double(lo));
  const OdeSystem2 sys = reduced_system(beta, ctx);
  std::vector<VectorField> out;
  for (Eigen::Index r = 0; r < N.rows(); ++r) {
    std::vector<Rational> v;
    bool ok = true;
    for (Eigen::Index k = 0; k < N.cols() && ok; ++k) {
      auto q = rationalize(N(r, k), 1000, 1e-7);
      if (!q) ok = false;
      else v.push_back(*q);
    }
    if (!ok) continue;
    // v = (g3_0, g3_1, g3_2, c1, c2, c3, c4)
    if (v[3] + v[4] != 0) continue;  // xi''' != 0: no polynomial closed form
    const Expr dx = x - x0;
    Expr xi = simplify(constant(v[0]) + constant(v[1]) * dx + constant(v[2] / 2) * dx * dx);
    Expr half = simplify(differentiate(xi, ctx.independent()) / constant(2));
    VectorField f{xi, simplify((half + constant(v[5])) * y + constant(v[3]) * z),
                  simplify(constant(v[4]) * y + (half + constant(v[6])) * z)};
    if (check_symmetry(sys, f).holds) out.push_back(f);
  }
  return out;
}

std::string variable_label(int dim) {
  if (dim == 7) return "beta variable, 7-dimensional";
  if (dim == 6) return "beta variable, 6-dimensional";
  return "numeric";
}

// collocation matrix of the algebraic residuals along the fundamental solution
Eigen::MatrixXd collocate(const Model& m, double lo, double hi, const ClassifyOptions& opt, Classification& c) {
  const int M = opt.collocation_points;
  std::vector<double> xs;
  for (int k = 0; k < M; ++k) xs.push_back(lo + (hi - lo) * k / (M - 1));
  Rhs f = [&](double xv, const State& s) {
    Eigen::Map<const Eigen::Matrix<double, kN, kN>> Phi(s.data());
    Eigen::Matrix<double, kN, kN> d = m.flow(xv) * Phi;
    return State(d.data(), d.data() + kN * kN);
  };
  Eigen::Matrix<double, kN, kN> Phi = Eigen::Matrix<double, kN, kN>::Identity();
  State s(Phi.data(), Phi.data() + kN * kN);
  Eigen::MatrixXd A(static_cast<Eigen::Index>(M * m.algebraic.size()), kN);
  Eigen::Index row = 0;
  for (int k = 0; k < M; ++k) {
    if (k > 0) s = rk4(f, xs[static_cast<std::size_t>(k - 1)], s, xs[static_cast<std::size_t>(k)], opt.step).states.back();
    Eigen::Map<const Eigen::Matrix<double, kN, kN>> P(s.data());
    for (const auto& r : m.algebraic) A.row(row++) = m.row(r, xs[static_cast<std::size_t>(k)]) * P;
  }
  c.rank_report = numerical_rank(A, opt.rel_tol);
  c.parameters = kN;
  c.collocation_points = M;
  bool translations_free = true;
  for (int j : kTranslationColumns) translations_free = translations_free && A.col(j).norm() <= c.rank_report.cutoff;
  c.translations = translations_free ? static_cast<int>(kTranslationColumns.size()) : 0;
  return A;
}

}  // namespace

std::vector<VectorField> constant_beta_generators(const Expr& b, const VarContext& ctx) {
  const Expr x = symbol(ctx.independent()), y = symbol(ctx.dependent(0)), z = symbol(ctx.dependent(1));
  const Expr O = constant(0);
  Expr bs = simplify(b);
  double bv = eval(bs, {});
  if (bv == 0) throw std::invalid_argument("constant_beta_generators needs b != 0");
  const int sign = bv > 0 ? 1 : -1;
  Expr half_abs = simplify(constant(sign) * bs / constant(2));
  Expr a = half_abs.is_constant() ? simplify(pow(half_abs, Rational(1, 2))) : make_sqrt(half_abs);
  const Expr ax = simplify(a * x);
  const Expr ep = make_exp(ax), em = make_exp(-ax), c = make_cos(ax), s = make_sin(ax);
  std::vector<VectorField> f{{constant(1), O, O}, {O, y, z}, {O, -z, y}};
  // u'' = i b u with u = y + i z: exponents a (1 + i) for b > 0, a (1 - i) for b < 0
  const Expr sg = constant(sign);
  f.push_back({O, simplify(ep * c), simplify(sg * ep * s)});
  f.push_back({O, simplify(-sg * ep * s), simplify(ep * c)});
  f.push_back({O, simplify(em * c), simplify(-sg * em * s)});
  f.push_back({O, simplify(sg * em * s), simplify(em * c)});
  return f;
}

Classification classify_beta(const Expr& beta_in, double lo, double hi, const ClassifyOptions& opt,
                             const VarContext& ctx) {
  const std::string x = ctx.independent();
  for (const auto& s : free_symbols(beta_in)) {
    if (s != x) throw std::invalid_argument("beta may only depend on " + x + " (found " + s + ")");
  }
  const Expr beta = simplify(beta_in);
  Classification c;
  if (zero_test(beta).zero) {
    c.dimension = 15;
    c.case_label = "beta identically zero";
    c.method = "symbolic";
    c.witnesses = free_particle_algebra(ctx);
    return c;
  }
  check_interval(beta, x, lo, hi);

  Model m = build_model(beta, differentiate(beta, x), ctx);
  Eigen::MatrixXd A = collocate(m, lo, hi, opt, c);
  const int numeric_dim = kN - c.rank_report.rank;
  const bool translations_free = c.translations > 0;

  if (zero_test(differentiate(beta, x)).zero) {
    c.case_label = "beta nonzero constant";
    auto w = constant_beta_generators(beta, ctx);
    const OdeSystem2 sys = reduced_system(beta, ctx);
    bool all = std::all_of(w.begin(), w.end(), [&](const VectorField& v) { return check_symmetry(sys, v).holds; });
    if (all && generator_rank(w, default_sample_seed(), ctx) == 7) {
      c.dimension = 7;
      c.method = "symbolic";
      c.witnesses = std::move(w);
      c.translations = 0;
      return c;
    }
  }
  c.dimension = numeric_dim;
  c.method = "numeric";
  if (c.case_label.empty()) c.case_label = variable_label(numeric_dim);
  if (translations_free) c.witnesses = linear_witnesses(A, opt.rel_tol, lo, beta, ctx);
  return c;
}

Classification classify_beta(const CoefficientFn& beta, double lo, double hi, const ClassifyOptions& opt,
                             const VarContext& ctx) {
  if (beta.is_symbolic()) {
    Expr e = beta.var() == ctx.independent() ? beta.expr()
                                             : substitute(beta.expr(), {{beta.var(), symbol(ctx.independent())}});
    return classify_beta(e, lo, hi, opt, ctx);
  }
  const Tabulated& t = beta.table();
  lo = std::max(lo, t.lo());
  hi = std::min(hi, t.hi());
  check_width(lo, hi);
  for (double v : t.ys()) {
    if (!std::isfinite(v)) throw PoleInInterval("tabulated beta is not finite", lo);
  }
  Classification c;
  Model m = build_model(symbol(kBeta), symbol(kDBeta), ctx);
  m.extra = [&t](double xv, Bindings& b) {
    b[kBeta] = t(xv);
    b[kDBeta] = t.derivative(xv);
  };
  collocate(m, lo, hi, opt, c);
  c.dimension = kN - c.rank_report.rank;
  c.method = "numeric";
  c.case_label = variable_label(*c.dimension);
  return c;
}

}  // namespace csa
