#include "doctest.h"

#include "csa/symmetry.hpp"
#include "support/fixtures.hpp"

#include <chrono>
#include <fstream>
#include <random>
#include <sstream>

using namespace csa;

namespace {

const VarContext ctx = VarContext::standard();
Expr P(const std::string& s) { return parse(s, ctx); }
VectorField F(const std::string& s) { return VectorField::parse(s, ctx); }

OdeSystem2 reduced(const std::string& beta) {
  return OdeSystem2(ctx, simplify(-(P(beta) * P("z"))), simplify(P(beta) * P("y")));
}
const OdeSystem2 free_particle(ctx, constant(0), constant(0));

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

using fixtures::kPrinted;

}  // namespace

TEST_CASE("prolongation residuals of the free particle") {
  auto [a1, a2] = prolong2_residuals(free_particle, F("xi=1"));
  CHECK(a1.is_zero());
  CHECK(a2.is_zero());
  auto [b1, b2] = prolong2_residuals(free_particle, F("eta1=y; eta2=z"));
  CHECK(b1.is_zero());
  CHECK(b2.is_zero());
  CHECK_FALSE(check_symmetry(free_particle, F("xi=x^3")).holds);
}

TEST_CASE("reduced form with beta = 1: rotations vs reflections") {
  auto sys = reduced("1");
  CHECK(check_symmetry(sys, F("eta1=-z; eta2=y")).holds);
  CHECK(check_symmetry(sys, F("eta1=y; eta2=z")).holds);
  // the symmetric swap does not commute with the rotation matrix
  CHECK_FALSE(check_symmetry(sys, F("eta1=z; eta2=y")).holds);
  CHECK_FALSE(check_symmetry(sys, F("eta1=y; eta2=-z")).holds);
}

TEST_CASE("printed constant-beta generators") {
  auto sys = reduced("1");
  std::vector<VectorField> fields;
  for (const auto& s : kPrinted) fields.push_back(F(s));
  CHECK(check_symmetry(sys, fields[0]).holds);
  for (std::size_t i = 1; i < fields.size(); ++i) CHECK_FALSE(check_symmetry(sys, fields[i]).holds);
  CHECK(generator_rank(fields, 1) == 7);
}

TEST_CASE("constant beta closed form") {
  for (const std::string b : {"1", "2", "-3", "1/5"}) {
    auto sys = reduced(b);
    auto w = constant_beta_generators(P(b));
    REQUIRE(w.size() == 7);
    for (const auto& v : w) CHECK_MESSAGE(check_symmetry(sys, v).holds, b << ": " << v.to_string());
    CHECK(generator_rank(w, 3) == 7);
  }
}

TEST_CASE("free particle algebra matches the golden file") {
  auto f = free_particle_algebra();
  REQUIRE(f.size() == 15);
  auto golden = parse_fields(read_file(CSA_GOLDEN_DIR "/free_particle.txt"), ctx);
  REQUIRE(golden.size() == 15);
  for (std::size_t i = 0; i < f.size(); ++i) {
    CHECK(zero_test(f[i].xi - golden[i].xi).zero);
    CHECK(zero_test(f[i].eta1 - golden[i].eta1).zero);
    CHECK(zero_test(f[i].eta2 - golden[i].eta2).zero);
    CHECK(check_symmetry(free_particle, f[i]).holds);
  }
  CHECK(generator_rank(f, 7) == 15);
}

TEST_CASE("generator_rank") {
  CHECK(generator_rank({F("xi=1"), F("xi=1")}, 0) == 1);
  auto f = free_particle_algebra();
  std::vector<VectorField> scaled;
  for (const auto& v : f) {
    scaled.push_back({simplify(constant(1000) * v.xi), simplify(constant(1000) * v.eta1), simplify(constant(1000) * v.eta2)});
  }
  CHECK(generator_rank(scaled, 7) == 15);
  CHECK_THROWS(generator_rank({}, 0));
}

TEST_CASE("witness text format round trip") {
  auto f = free_particle_algebra();
  auto back = parse_fields(serialize_fields(f), ctx);
  REQUIRE(back.size() == f.size());
  for (std::size_t i = 0; i < f.size(); ++i) CHECK(back[i].to_string() == f[i].to_string());
  CHECK_THROWS_AS(VectorField::parse("xi=y'", ctx), std::invalid_argument);
  CHECK_THROWS_AS(VectorField::parse("zeta=1", ctx), std::invalid_argument);
  CHECK_THROWS_AS(VectorField::parse("xi=1; xi=2", ctx), std::invalid_argument);
}

TEST_CASE("determining system examples") {
  // beta = 0: only the free-particle equations survive
  auto zero = determining_system_reduced(constant(0));
  const auto jets = jet_chain();
  for (const auto& eq : zero.equations) {
    for (const auto& s : free_symbols(eq.residual)) CHECK(s.find('x') == std::string::npos);
  }
  // beta = 1: the first-order groups force g1 = g2 = 0
  auto one = determining_system_reduced(constant(1)).collected();
  auto has = [&](const std::vector<std::pair<std::string, Expr>>& c, const Expr& e) {
    return std::any_of(c.begin(), c.end(), [&](const auto& p) {
      return zero_test(p.second - e).zero || zero_test(p.second + e).zero;
    });
  };
  CHECK(has(one, symbol("g1_0")));
  CHECK(has(one, symbol("g2_0")));
  CHECK_FALSE(has(determining_system_reduced(constant(0)).collected(), symbol("g1_0")));
  // beta = x with the linear ansatz: coefficient of y in the first zeroth-order group
  auto lin = determining_system_reduced(P("x"), Ansatz::Linear).collected();
  CHECK(has(lin, symbol("g3_3") / constant(2) + P("x") * (symbol("c1") + symbol("c2"))));
  CHECK(has(lin, symbol("g6_2") + P("x") * symbol("g9_0")));
  CHECK(has(lin, P("x") * (constant(2) * symbol("g3_1") - symbol("c3") + symbol("c4")) + symbol("g3_0")));
}

TEST_CASE("explicit determining system agrees with the prolongation") {
  // generated coefficient = factor * explicit equation
  const std::vector<std::tuple<std::string, std::size_t, int>> map{
      {"R1 [1]", 13, 1}, {"R1 [y']", 9, -1}, {"R1 [z']", 10, 2},
      {"R2 [1]", 14, 1}, {"R2 [z']", 11, -1}, {"R2 [y']", 12, 2}};
  for (const std::string b : {"1", "x", "x^-2", "exp(x)"}) {
    auto e = determining_system_reduced(P(b));
    auto g = determining_system_generated(P(b));
    REQUIRE(e.equations.size() == 15);
    std::map<std::string, Expr> gen;
    for (const auto& eq : g.equations) gen[eq.group] = eq.residual;
    for (const auto& [name, idx, factor] : map) {
      Expr diff = gen.count(name) ? gen[name] : constant(0);
      diff = simplify(diff - constant(factor) * e.equations[idx].residual);
      CHECK_MESSAGE(zero_test(diff).zero, b << " " << name);
      const auto syms = free_symbols(diff);
      std::vector<std::string> fs(syms.begin(), syms.end());
      if (!fs.empty()) CHECK(is_zero_sampled(diff, fs, 30, 11));
    }
    CHECK(gen.size() <= 6);
  }

  // second- and third-order terms against a field outside the ansatz
  VectorField V = F("xi=x*y^2 + 3*y*z + x^2*z^2 + 5*y^3; eta1=y*z^2 + x*z^2 + 7*z^3*y; eta2=y^2*x + z^3 + 11*y^3*z");
  auto [r1, r2] = prolong2_residuals(reduced("x"), V);
  auto dy = [](const Expr& e) { return differentiate(e, "y"); };
  auto dz = [](const Expr& e) { return differentiate(e, "z"); };
  auto dx = [](const Expr& e) { return differentiate(e, "x"); };
  auto coeff = [](const Expr& r, std::vector<int> exps) {
    for (const auto& [e, c] : polynomial_terms(r, {"y'", "z'"})) {
      if (e == exps) return c;
    }
    return constant(0);
  };
  auto same = [](const Expr& a, const Expr& b) { return zero_test(a - b).zero; };
  const Expr two = constant(2);
  CHECK(same(coeff(r1, {3, 0}), -dy(dy(V.xi))));
  CHECK(same(coeff(r1, {2, 1}), -two * dy(dz(V.xi))));
  CHECK(same(coeff(r1, {1, 2}), -dz(dz(V.xi))));
  CHECK(same(coeff(r1, {0, 2}), dz(dz(V.eta1))));
  CHECK(same(coeff(r2, {0, 3}), -dz(dz(V.xi))));
  CHECK(same(coeff(r2, {2, 0}), dy(dy(V.eta2))));
  CHECK(same(coeff(r1, {2, 0}), dy(dy(V.eta1)) - two * dx(dy(V.xi))));
  CHECK(same(coeff(r1, {1, 1}), two * (dy(dz(V.eta1)) - dx(dz(V.xi)))));
  CHECK(same(coeff(r2, {1, 1}), two * (dy(dz(V.eta2)) - dx(dy(V.xi)))));
  CHECK(same(coeff(r2, {0, 2}), dz(dz(V.eta2)) - two * dx(dz(V.xi))));
}

TEST_CASE("classification table") {
  struct Case {
    std::string beta;
    double lo, hi;
    int dim;
  };
  const std::vector<Case> cases{
      {"0", 0.5, 3, 15},        {"1", 0.5, 3, 7},        {"2", 0.5, 3, 7},      {"x^-2", 0.5, 3, 7},
      {"x^-4", 0.5, 3, 7},      {"(x+1)^-4", 0.5, 3, 7}, {"x^-1", 0.5, 3, 6},   {"x^2", 0.5, 3, 6},
      {"x^2+1", 0.5, 3, 6},     {"x^2-1", 1.5, 3, 6},    {"exp(x)", 0, 2, 6},
  };
  for (const auto& c : cases) {
    auto start = std::chrono::steady_clock::now();
    auto r = classify_beta(P(c.beta), c.lo, c.hi);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    REQUIRE(r.dimension);
    CHECK_MESSAGE(*r.dimension == c.dim, c.beta);
    CHECK(secs < 10);
    auto sys = reduced(c.beta);
    for (const auto& w : r.witnesses) CHECK_MESSAGE(check_symmetry(c.beta == "0" ? free_particle : sys, w).holds, c.beta);
  }
  CHECK(classify_beta(P("0"), 0, 1).case_label == "beta identically zero");
  CHECK(classify_beta(P("1"), 0, 1).case_label == "beta nonzero constant");
  CHECK(classify_beta(P("x^-2"), 0.5, 3).case_label == "beta variable, 7-dimensional");
  CHECK(classify_beta(P("exp(x)"), 0, 2).case_label == "beta variable, 6-dimensional");
}

TEST_CASE("classification invariants") {
  CHECK(*classify_beta(P("x^-2"), 0.5, 3).dimension == *classify_beta(P("x^-2"), 1, 4).dimension);
  auto v = classify_beta(P("x^-2"), 0.5, 3);
  CHECK(v.translations == 4);
  CHECK(v.witnesses.size() == 3);
  CHECK(v.collocation_points == 40);
  CHECK(v.parameters == 11);

  // exponential beta: two linear fields and four translations
  auto e = classify_beta(P("exp(x)"), 0, 2);
  CHECK(e.translations == 4);
  CHECK(e.witnesses.size() == 2);
  auto sys = reduced("exp(x)");
  CHECK_FALSE(check_symmetry(sys, F("eta1=y; eta2=-exp(x)*z")).holds);
  CHECK_FALSE(check_symmetry(sys, F("eta1=exp(x)*y; eta2=z")).holds);

  CHECK_THROWS_AS(classify_beta(P("x^-1"), -1, 1), PoleInInterval);
  CHECK_THROWS_AS(classify_beta(P("x"), 1, 1.001), IntervalTooSmall);
  CHECK_THROWS_AS(classify_beta(P("y"), 0, 1), std::invalid_argument);
}

TEST_CASE("no 5- or 8-dimensional cases") {
  std::vector<std::string> corpus{"0", "1", "2", "x^-2", "x^-4", "(x+1)^-4", "x^-1", "x^2", "x^2+1", "x^2-1", "exp(x)", "-3"};
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 5; ++i) {
    auto c = [&] { return std::to_string(static_cast<int>(rng() % 5) + 1); };
    corpus.push_back("(" + c() + "*x + " + c() + ")/(" + c() + "*x^2 + " + c() + ")");
  }
  for (const auto& b : corpus) {
    double lo = b == "x^2-1" ? 1.5 : 0.5;
    auto r = classify_beta(P(b), lo, 3);
    REQUIRE(r.dimension);
    CHECK_MESSAGE((*r.dimension == 6 || *r.dimension == 7 || *r.dimension == 15), b);
  }
}
