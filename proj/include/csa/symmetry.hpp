#pragma once

// Lie point symmetries of two second-order ODEs: prolongation residuals,
// determining equations of the reduced form y'' = -beta z, z'' = beta y,
// and the symmetry-dimension classifier.

#include "csa/cubic.hpp"
#include "csa/canon.hpp"
#include "csa/numeric.hpp"

namespace csa {

struct VectorField {
  Expr xi, eta1, eta2;

  /// "xi=<expr>; eta1=<expr>; eta2=<expr>"
  std::string to_string() const;
  static VectorField parse(const std::string& line, const VarContext& ctx);
};

std::string serialize_fields(const std::vector<VectorField>& fields);
std::vector<VectorField> parse_fields(const std::string& text, const VarContext& ctx);

/// Residuals of the infinitesimal symmetry condition on y'' = omega1,
/// z'' = omega2. `jets` lists extra symbols with their x-derivatives
/// (unknown functions of x in an ansatz).
std::pair<Expr, Expr> prolong2_residuals(const OdeSystem2& sys, const VectorField& V,
                                         const std::map<std::string, Expr>& jets = {});

struct SymmetryReport {
  bool holds{false};
  std::array<ZeroVerdict, 2> residuals;
};
SymmetryReport check_symmetry(const OdeSystem2& sys, const VectorField& V);

/// Unknown functions g1..g9 of x and their derivatives as jet symbols
/// "g<i>_<k>" (k-th derivative), constants c1..c4.
std::string jet_name(int i, int k);
/// Chain map g<i>_<k> -> g<i>_<k+1> for i = 1..9, k < order.
std::map<std::string, Expr> jet_chain(int order = 6);

enum class Ansatz {
  Quadratic,  // xi = g1 y + g2 z + g3, eta quadratic through g1', g2'
  Linear,     // xi = g3, eta = (g3'/2 + c3) y + c1 z + g6, (g3'/2 + c4) z + c2 y + g9
};
VectorField ansatz_field(Ansatz a, const VarContext& ctx);

struct DeterminingEquation {
  std::string group;  // "cubic", "quadratic", "first-order 1/2", "zeroth-order 1/2"; "R1 [..]" when generated
  Expr residual;      // in x, y, z, jets, constants
};

struct DeterminingSystem {
  enum class Source { Explicit, Generated } source{Source::Explicit};
  std::vector<DeterminingEquation> equations;
  std::vector<std::string> dependents{"y", "z"};
  /// Coefficients of the residuals, collected in y, z (nonzero entries only).
  std::vector<std::pair<std::string, Expr>> collected() const;
};

/// The explicit determining equations of the reduced form, evaluated on the ansatz.
DeterminingSystem determining_system_reduced(const Expr& beta, Ansatz a = Ansatz::Quadratic,
                                             const VarContext& ctx = VarContext::standard());
/// Same, with beta' supplied (beta and dbeta may be placeholder symbols).
DeterminingSystem determining_system_reduced(const Expr& beta, const Expr& dbeta, Ansatz a, const VarContext& ctx);
/// The same system obtained by splitting the prolongation residuals in y', z'.
DeterminingSystem determining_system_generated(const Expr& beta, Ansatz a = Ansatz::Quadratic,
                                               const VarContext& ctx = VarContext::standard());

struct IntervalTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct PoleInInterval : std::runtime_error {
  PoleInInterval(const std::string& msg, double at) : std::runtime_error(msg), where(at) {}
  double where;
};

struct Classification {
  std::optional<int> dimension;  // nullopt: unknown
  std::string case_label;
  std::vector<VectorField> witnesses;
  int translations{0};           // solution-translation fields found numerically (no closed form)
  RankReport rank_report;        // of the collocation matrix (numeric path)
  int parameters{0};             // columns of the collocation matrix
  int collocation_points{0};
  std::string method;            // "symbolic" or "numeric"
};

struct ClassifyOptions {
  int collocation_points{40};
  double rel_tol{1e-8};
  double step{1e-3};
};

Classification classify_beta(const Expr& beta, double lo, double hi, const ClassifyOptions& opt = {},
                             const VarContext& ctx = VarContext::standard());

/// Tabulated or symbolic beta. Tables are classified numerically over their
/// own range intersected with [lo, hi]; no closed-form witnesses.
Classification classify_beta(const CoefficientFn& beta, double lo, double hi, const ClassifyOptions& opt = {},
                             const VarContext& ctx = VarContext::standard());

/// Closed-form seven-dimensional algebra of y'' = -b z, z'' = b y for a constant b != 0.
std::vector<VectorField> constant_beta_generators(const Expr& b, const VarContext& ctx = VarContext::standard());

/// Basis of the point symmetries of y'' = 0, z'' = 0.
std::vector<VectorField> free_particle_algebra(const VarContext& ctx = VarContext::standard());

/// Rank of the fields evaluated at 12 random points (36 columns).
int generator_rank(const std::vector<VectorField>& fields, std::uint64_t seed, const VarContext& ctx = VarContext::standard(),
                   double rel_tol = 1e-8);

}  // namespace csa
