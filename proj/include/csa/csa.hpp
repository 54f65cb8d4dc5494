#pragma once

// Correspondence between real two-equation systems and scalar complex ODEs
// u'' = w(x, u, u') with u = y + i z.

#include "csa/cubic.hpp"

namespace csa {

struct CrViolated : std::runtime_error {
  CrViolated(const std::string& msg, std::string cond) : std::runtime_error(msg), condition(std::move(cond)) {}
  std::string condition;
};

/// The four Cauchy-Riemann conditions in (y, z) and (y', z').
ConditionReport check_cr(const OdeSystem2& sys);

/// Two-variable CR conditions of a coefficient pair in (y, z).
ConditionReport check_cr_pair(const ExprPair& e, const VarContext& ctx, const std::string& label);

class ComplexOde {
 public:
  /// Throws CrViolated.
  ComplexOde(VarContext ctx, Expr re_omega, Expr im_omega);

  const VarContext& ctx() const { return ctx_; }
  const Expr& re_omega() const { return re_; }
  const Expr& im_omega() const { return im_; }
  OdeSystem2 system() const { return OdeSystem2(ctx_, re_, im_); }

 private:
  VarContext ctx_;
  Expr re_;
  Expr im_;
};

/// Throws CrViolated carrying the first failing condition.
ComplexOde complexify(const OdeSystem2& sys);

/// System of u'' + E3 u'^3 + E2 u'^2 + E1 u' + E0 = 0 split into real and
/// imaginary parts; E[j] holds Ej. Throws CrViolated.
OdeSystem2 realify(const std::array<ExprPair, 4>& E, const VarContext& ctx);

}  // namespace csa
