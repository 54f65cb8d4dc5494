#pragma once

// Point transformations of systems and reduction of linear systems to
// canonical forms.

#include "csa/cubic.hpp"
#include "csa/numeric.hpp"

#include <variant>

namespace csa {

/// (x, y, z) -> (X, Y, Z), all in the source variables.
struct PointTransformation {
  Expr X, Y, Z;
  static PointTransformation identity(const VarContext& ctx);
};

struct NonInvertible : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct DxXZero : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct RhoVanishes : std::runtime_error {
  RhoVanishes(const std::string& msg, double at) : std::runtime_error(msg), where(at) {}
  double where;
};
struct MDegenerate : std::runtime_error {
  MDegenerate(const std::string& msg, double at) : std::runtime_error(msg), where(at) {}
  double where;
};

/// A coefficient function of the independent variable: closed form or table.
class CoefficientFn {
 public:
  CoefficientFn() : CoefficientFn(constant(0), "x") {}
  CoefficientFn(Expr e, std::string var);
  explicit CoefficientFn(Tabulated t);

  bool is_symbolic() const { return std::holds_alternative<Expr>(value_); }
  const Expr& expr() const { return std::get<Expr>(value_); }
  const Tabulated& table() const { return std::get<Tabulated>(value_); }
  const std::string& var() const { return var_; }

  double operator()(double x) const;
  double derivative(double x) const;
  /// Symbolic derivative (symbolic functions only).
  CoefficientFn differentiated() const;

  /// Symbolically zero (tables report false).
  bool is_zero() const;
  /// Symbolically free of the variable.
  bool is_constant() const;
  std::string describe() const;

 private:
  std::variant<Expr, Tabulated> value_;
  std::string var_;
  Expr derivative_;
};

enum class FormKind { General, Optimal, FirstOrder, ZeroOrder, Reduced };
std::string to_string(FormKind k);

/// Coefficient slots per kind:
///   General:    A11 A12 A21 A22 B11 B12 B21 B22 c1 c2   (u'' = A u' + B u + c)
///   Optimal:    d11 d12 d21                           (y'' = d11 y + d12 z, z'' = d21 y - d11 z)
///   FirstOrder: a1 a2                                 (y'' = a1 y' - a2 z', z'' = a2 y' + a1 z')
///   ZeroOrder:  a3 a4                                 (y'' = a3 y - a4 z, z'' = a4 y + a3 z)
///   Reduced:    beta                                  (y'' = -beta z, z'' = beta y)
struct LinearForm {
  FormKind kind{FormKind::Reduced};
  std::vector<CoefficientFn> coefficients;
  double lo{0.0}, hi{1.0};  // working interval of the independent variable

  static LinearForm general(std::vector<CoefficientFn> c, double lo, double hi);
  static LinearForm optimal(CoefficientFn d11, CoefficientFn d12, CoefficientFn d21, double lo, double hi);
  static LinearForm first_order(CoefficientFn a1, CoefficientFn a2, double lo, double hi);
  static LinearForm zero_order(CoefficientFn a3, CoefficientFn a4, double lo, double hi);
  static LinearForm reduced(CoefficientFn beta, double lo, double hi);

  bool is_symbolic() const;
  /// The system in ctx (symbolic coefficients only).
  OdeSystem2 to_system(const VarContext& ctx) const;
  /// Right-hand side for numeric integration of state (y, z, y', z').
  State rhs(double x, const State& s) const;
};

/// Recognize a linear system with symbolic coefficients; the most specific
/// matching kind wins (Reduced, ZeroOrder, FirstOrder, Optimal, General).
std::optional<LinearForm> identify_linear_form(const OdeSystem2& sys, double lo = 0.0, double hi = 1.0);

struct TransformResult {
  OdeSystem2 target;  // in the target context
  Expr first[2];      // Y', Z' in source variables
  Expr second[2];     // Y'', Z'' in source variables (y'' -> omega substituted)
  std::vector<std::string> warnings;
};

/// Push sys through T. The result is expressed in target_ctx (new independent
/// variable, new dependents), using the declared inverse families: X a
/// Moebius-type function of x alone; (Y, Z) affine in (y, z), or exponential-polar
/// (Y, Z) = e^y (cos z, sin z). Throws NonInvertible or DxXZero.
TransformResult transform_system(const OdeSystem2& sys, const PointTransformation& T, const VarContext& target_ctx);
TransformResult transform_system(const OdeSystem2& sys, const PointTransformation& T);

/// Compare a transform result with an expected target system given in the
/// target context: once in the new variables, once pulled back to the source.
ConditionReport match_target(const TransformResult& r, const OdeSystem2& expected, const PointTransformation& T,
                             const VarContext& source_ctx);

/// Solution of rho'' = q rho with rho(x0) = 1, rho'(x0) = 0 together with the
/// new independent variable x~ = int rho^-2.
struct Rescaling {
  Tabulated rho;    // over the old variable
  Tabulated new_x;  // x~ as a function of the old variable (derivative rho^-2)
  Tabulated old_x;  // the inverse, old variable as a function of x~
  double halfstep_error{0.0};  // max |rho_h - rho_{h/2}| at common nodes
};

struct OptimalReduction {
  LinearForm optimal;
  Rescaling scaling;
};

/// Form u'' = D u (a General form with A = 0, c = 0) -> trace-free optimal form.
OptimalReduction reduce_optimal(const LinearForm& general, double h = 1e-3);

struct ReducedReduction {
  LinearForm reduced;
  Rescaling scaling;
  /// (t, y, z, y', z') of the zero-order form <-> (x~, Y, Z, Y', Z') of the reduced form.
  std::pair<double, State> to_reduced(double t, const State& s) const;
  std::pair<double, State> from_reduced(double xt, const State& s) const;
};

/// ZeroOrder -> Reduced with beta = rho^4 a4 in the new variable.
ReducedReduction reduce_zero_order(const LinearForm& zero_order, double h = 1e-3);

struct ZeroOrderReduction {
  LinearForm zero_order;    // closed form when the input is symbolic, else tabulated
  LinearForm from_tables;   // a3, a4 evaluated from the tabulated M
  Tabulated M1, M2;
  double table_deviation{0.0};  // max difference between the two forms on the grid
  /// (y, z, y', z') -> (w1, w2, w1', w2') for y + i z = M (w1 + i w2).
  State to_zero_order(double x, const State& s) const;
  /// Inverse of to_zero_order.
  State from_zero_order(double x, const State& w) const;
};

/// FirstOrder -> ZeroOrder via 2 M' = zeta M with M(x0) = 1.
ZeroOrderReduction reduce_first_order(const LinearForm& first_order, double h = 1e-3);

struct EquivalenceVerdict {
  bool consistent{false};
  std::vector<std::string> chain;  // reasoning steps
  std::optional<std::array<Rational, 4>> solution;  // (a, b, c, d) when consistent
  bool value_level_similar{false};    // the concrete constant matrices are similar
  bool outside_reduced_reach{false};  // nonzero nilpotent optimal form
};

/// Can y~ = a y + b z, z~ = c y + d z (constants) map the optimal form to the
/// zero-order form? Nonzero optimal coefficients are treated as independent
/// functions of x; a value-level similarity check of the concrete constants is
/// reported alongside.
EquivalenceVerdict attempt_linear_equivalence(const std::array<Rational, 3>& optimal,
                                              const std::array<Rational, 2>& zero_order);
/// Same question with the roles of source and target swapped.
EquivalenceVerdict attempt_linear_equivalence_reverse(const std::array<Rational, 2>& zero_order,
                                                      const std::array<Rational, 3>& optimal);
/// x-dependent a(x)..d(x): the first-derivative terms force a' = b' = c' = d' = 0,
/// after which the constant analysis applies.
EquivalenceVerdict attempt_linear_equivalence_variable(const std::array<Rational, 3>& optimal,
                                                       const std::array<Rational, 2>& zero_order);

}  // namespace csa
