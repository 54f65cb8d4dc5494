#pragma once

// Systems y'' = omega1, z'' = omega2 and their cubic-in-first-derivatives form.

#include "csa/expr.hpp"

#include <array>

namespace csa {

struct OdeSystem2 {
  OdeSystem2(VarContext ctx, Expr omega1, Expr omega2);

  VarContext ctx;
  Expr omega1;
  Expr omega2;

  const Expr& omega(int i) const { return i == 0 ? omega1 : omega2; }
};

/// Parse both right-hand sides in ctx.
OdeSystem2 parse_system(const std::string& omega1, const std::string& omega2, const VarContext& ctx);

struct Condition {
  std::string name;
  Expr lhs;
  Expr rhs;
  bool holds{false};
  ZeroMethod method{ZeroMethod::Symbolic};
  int dropped_samples{0};
};

struct ConditionReport {
  std::vector<Condition> conditions;
  bool holds{true};

  /// First failing condition, or nullptr.
  const Condition* first_failure() const;
  void add(Condition c);
};

/// Decide lhs == rhs with the expr zero-test policy.
Condition decide(const std::string& name, const Expr& lhs, const Expr& rhs);

/// Coefficients of
///   y'' + a1 y'^3 + a2 y'^2 z' + a3 y' z'^2 + a4 z'^3 + b1 y'^2 + b2 y'z' + b3 z'^2 + g1 y' + g2 z' + d = 0
/// for each equation (index 0 for y'', 1 for z'').
struct CubicForm {
  std::array<std::array<Expr, 4>, 2> alpha;
  std::array<std::array<Expr, 3>, 2> beta;
  std::array<std::array<Expr, 2>, 2> gamma;
  std::array<Expr, 2> delta;
};

struct DegreeTooHigh : std::runtime_error {
  DegreeTooHigh(const std::string& msg, Expr m) : std::runtime_error(msg), monomial(std::move(m)) {}
  Expr monomial;
};

/// Throws DegreeTooHigh or NotPolynomial.
CubicForm extract_cubic(const OdeSystem2& sys);

/// Inverse of extract_cubic.
OdeSystem2 assemble(const CubicForm& cf, const VarContext& ctx);

/// Complex coefficient as (real, imaginary) parts.
using ExprPair = std::pair<Expr, Expr>;

struct CubicCorrespondenceReport {
  ConditionReport report;
  /// E0..E3 of u'' + E3 u'^3 + E2 u'^2 + E1 u' + E0 = 0, present when the report holds.
  std::optional<std::array<ExprPair, 4>> coefficients;
};

CubicCorrespondenceReport check_cubic_correspondence(const CubicForm& cf);

}  // namespace csa
