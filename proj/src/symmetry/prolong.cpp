#include "csa/symmetry.hpp"

#include <random>
#include <sstream>

namespace csa {

namespace {

std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

std::string VectorField::to_string() const {
  return "xi=" + print(xi) + "; eta1=" + print(eta1) + "; eta2=" + print(eta2);
}

VectorField VectorField::parse(const std::string& line, const VarContext& ctx) {
  std::map<std::string, Expr> parts;
  std::istringstream is(line);
  std::string item;
  while (std::getline(is, item, ';')) {
    item = trim(item);
    if (item.empty()) continue;
    auto eq = item.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=expr in generator: " + item);
    std::string key = trim(item.substr(0, eq));
    if (key != "xi" && key != "eta1" && key != "eta2") throw std::invalid_argument("unknown generator key: " + key);
    if (parts.count(key)) throw std::invalid_argument("duplicate generator key: " + key);
    parts[key] = csa::parse(item.substr(eq + 1), ctx);
  }
  VectorField v{constant(0), constant(0), constant(0)};
  if (parts.count("xi")) v.xi = parts["xi"];
  if (parts.count("eta1")) v.eta1 = parts["eta1"];
  if (parts.count("eta2")) v.eta2 = parts["eta2"];
  const std::string& y1 = ctx.first_derivative(0);
  const std::string& z1 = ctx.first_derivative(1);
  for (const Expr* e : {&v.xi, &v.eta1, &v.eta2}) {
    if (depends_on(*e, y1) || depends_on(*e, z1)) {
      throw std::invalid_argument("point symmetry components may not contain derivatives");
    }
  }
  return v;
}

std::string serialize_fields(const std::vector<VectorField>& fields) {
  std::string out;
  for (const auto& f : fields) out += f.to_string() + "\n";
  return out;
}

std::vector<VectorField> parse_fields(const std::string& text, const VarContext& ctx) {
  std::vector<VectorField> out;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    out.push_back(VectorField::parse(line, ctx));
  }
  return out;
}

std::pair<Expr, Expr> prolong2_residuals(const OdeSystem2& sys, const VectorField& V,
                                         const std::map<std::string, Expr>& jets) {
  const VarContext& ctx = sys.ctx;
  const std::string x = ctx.independent(), y = ctx.dependent(0), z = ctx.dependent(1);
  const std::string y1 = ctx.first_derivative(0), z1 = ctx.first_derivative(1);
  std::map<std::string, Expr> chain = jets;
  chain[y] = symbol(y1);
  chain[z] = symbol(z1);
  chain[y1] = sys.omega1;
  chain[z1] = sys.omega2;
  auto D = [&](const Expr& e) { return total_derivative(e, x, chain); };

  const Expr Dxi = D(V.xi);
  const Expr p1 = simplify(D(V.eta1) - symbol(y1) * Dxi);
  const Expr p2 = simplify(D(V.eta2) - symbol(z1) * Dxi);
  const Expr q1 = D(p1) - sys.omega1 * Dxi;
  const Expr q2 = D(p2) - sys.omega2 * Dxi;
  auto applied = [&](const Expr& w) {
    return V.xi * differentiate(w, x) + V.eta1 * differentiate(w, y) + V.eta2 * differentiate(w, z) +
           p1 * differentiate(w, y1) + p2 * differentiate(w, z1);
  };
  return {simplify(q1 - applied(sys.omega1)), simplify(q2 - applied(sys.omega2))};
}

SymmetryReport check_symmetry(const OdeSystem2& sys, const VectorField& V) {
  auto [r1, r2] = prolong2_residuals(sys, V);
  SymmetryReport rep;
  rep.residuals = {zero_test(r1), zero_test(r2)};
  rep.holds = rep.residuals[0].zero && rep.residuals[1].zero;
  return rep;
}

int generator_rank(const std::vector<VectorField>& fields, std::uint64_t seed, const VarContext& ctx,
                   double rel_tol) {
  if (fields.empty()) throw std::invalid_argument("generator_rank needs at least one field");
  const std::string x = ctx.independent(), y = ctx.dependent(0), z = ctx.dependent(1);
  for (int attempt = 0; attempt < 8; ++attempt) {
    std::mt19937_64 rng(seed + static_cast<std::uint64_t>(attempt));
    std::uniform_real_distribution<double> mag(0.1, 2.0);
    auto signed_mag = [&] { return (rng() & 1 ? 1.0 : -1.0) * mag(rng); };
    Eigen::MatrixXd m(static_cast<Eigen::Index>(fields.size()), 36);
    try {
      for (int p = 0; p < 12; ++p) {
        Bindings b{{x, mag(rng)}, {y, signed_mag()}, {z, signed_mag()}};
        for (std::size_t i = 0; i < fields.size(); ++i) {
          const auto r = static_cast<Eigen::Index>(i);
          m(r, 3 * p) = eval(fields[i].xi, b);
          m(r, 3 * p + 1) = eval(fields[i].eta1, b);
          m(r, 3 * p + 2) = eval(fields[i].eta2, b);
        }
      }
    } catch (const EvalError&) {
      continue;
    }
    return numerical_rank(m, rel_tol).rank;
  }
  throw EvalError("every sample set hit a domain error", "generator_rank");
}

std::vector<VectorField> free_particle_algebra(const VarContext& ctx) {
  const Expr x = symbol(ctx.independent()), y = symbol(ctx.dependent(0)), z = symbol(ctx.dependent(1));
  const Expr O = constant(0), I = constant(1);
  std::vector<VectorField> f{{I, O, O}, {O, I, O}, {O, O, I}};
  // linear fields a d_b for a, b in {x, y, z}
  for (const Expr& a : {x, y, z}) {
    f.push_back({a, O, O});
    f.push_back({O, a, O});
    f.push_back({O, O, a});
  }
  // projective fields a (x d_x + y d_y + z d_z)
  for (const Expr& a : {x, y, z}) f.push_back({simplify(a * x), simplify(a * y), simplify(a * z)});
  return f;
}

}  // namespace csa
