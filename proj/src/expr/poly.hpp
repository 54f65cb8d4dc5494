#pragma once

// Canonical Laurent-polynomial representation over "atoms" (symbols,
// transcendental function applications, radical bases). Internal to the
// expression kernel.

#include "csa/expr.hpp"

#include <map>
#include <optional>
#include <vector>

namespace csa::detail {

struct Factor {
  Expr atom;
  Rational exp;
};
using Monomial = std::vector<Factor>;  // sorted by atom, unique atoms, nonzero exponents

struct MonoLess {
  bool operator()(const Monomial& a, const Monomial& b) const;
};

using Poly = std::map<Monomial, Rational, MonoLess>;

enum class AtomKind { Symbol, Exp, Log, Sin, Cos, Prime, Base };
AtomKind atom_kind(const Expr& atom);

struct Fraction {
  Poly numerator;
  std::vector<std::pair<Expr, Rational>> denominator;  // base atom, integer power
};

/// Conversion and arithmetic with a per-call memo table.
class Canon {
 public:
  Poly to_poly(const Expr& e);
  Expr to_expr(const Poly& p);

  Poly add(const Poly& a, const Poly& b) const;
  Poly scale(const Poly& a, const Rational& c) const;
  Poly mul(const Poly& a, const Poly& b);
  Poly power(const Poly& p, const Rational& r);
  Poly diff(const Poly& p, const std::string& v);

  /// Common denominator over radical/sum bases, then exact cancellation.
  Fraction cancel(const Poly& p);
  Expr render(const Fraction& f);

  bool is_rational(const Poly& p);
  /// Poly of a base atom (the polynomial it stands for).
  Poly base_poly(const Expr& atom);

 private:
  Poly mul_mono(const Monomial& a, const Monomial& b);
  Poly normalize(std::map<Expr, Rational, ExprLess> factors);
  Poly exp_of(const Poly& arg);
  Poly log_of(const Poly& arg);
  Poly trig_of(Kind k, const Poly& arg);
  Poly positive_rational_power(const Rational& c, const Rational& r);
  Poly single_term_power(const Rational& c, const Monomial& m, const Rational& r);
  std::optional<Poly> divide_exact(const Poly& n, const Poly& b);
  Expr render_term(const Monomial& m, const Rational& c);

  std::map<Expr, Poly, ExprLess> memo_;
  std::map<Expr, Poly, ExprLess> bases_;
};

Poly constant_poly(const Rational& c);
Poly atom_poly(const Expr& atom, const Rational& e = 1);
bool atom_depends_on(const Expr& atom, const std::string& v);

}  // namespace csa::detail
