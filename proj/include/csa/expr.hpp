#pragma once

// Symbolic expression kernel: immutable trees, parsing/printing, exact
// differentiation, canonical simplification, numeric evaluation and
// polynomial coefficient collection.

#include "csa/rational.hpp"

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace csa {

enum class Kind { Constant, Float, Symbol, Add, Mul, Pow, Neg, Div, Exp, Log, Sin, Cos, Sqrt };

class Expr;

struct Node {
  Kind kind{Kind::Constant};
  Rational value{0};      // Constant; exponent for Pow
  double fvalue{0.0};     // Float
  std::string name;       // Symbol
  std::vector<Expr> args;
  std::size_t hash{0};
};

/// Immutable, shareable expression handle. Construction goes through the
/// make_* functions, which keep the tree in structurally normalized form.
class Expr {
 public:
  Expr();  // Constant 0
  explicit Expr(std::shared_ptr<const Node> n) : node_(std::move(n)) {}

  Kind kind() const { return node_->kind; }
  const Node& node() const { return *node_; }
  const std::vector<Expr>& args() const { return node_->args; }
  const Expr& arg(std::size_t i = 0) const { return node_->args.at(i); }
  const std::string& name() const { return node_->name; }
  const Rational& value() const { return node_->value; }
  const Rational& exponent() const { return node_->value; }
  std::size_t hash() const { return node_->hash; }

  bool is_constant() const { return kind() == Kind::Constant; }
  bool is_zero() const { return is_constant() && value() == 0; }
  bool is_one() const { return is_constant() && value() == 1; }
  bool is_symbol() const { return kind() == Kind::Symbol; }
  bool is_symbol(const std::string& n) const { return is_symbol() && name() == n; }

  friend bool operator==(const Expr& a, const Expr& b);
  friend bool operator!=(const Expr& a, const Expr& b) { return !(a == b); }

 private:
  std::shared_ptr<const Node> node_;
};

/// Total structural order (used for canonical sorting).
int compare(const Expr& a, const Expr& b);
struct ExprLess {
  bool operator()(const Expr& a, const Expr& b) const { return compare(a, b) < 0; }
};

Expr constant(const Rational& r);
Expr constant(std::int64_t n);
Expr floating(double v);
Expr symbol(const std::string& name);
Expr make_add(std::vector<Expr> terms);
Expr make_mul(std::vector<Expr> factors);
Expr make_neg(const Expr& a);
Expr make_div(const Expr& num, const Expr& den);
Expr make_pow(const Expr& base, const Rational& exponent);
Expr make_exp(const Expr& a);
Expr make_log(const Expr& a);
Expr make_sin(const Expr& a);
Expr make_cos(const Expr& a);
Expr make_sqrt(const Expr& a);

Expr operator+(const Expr& a, const Expr& b);
Expr operator-(const Expr& a, const Expr& b);
Expr operator-(const Expr& a);
Expr operator*(const Expr& a, const Expr& b);
Expr operator/(const Expr& a, const Expr& b);
Expr pow(const Expr& base, const Rational& exponent);

/// Alphabet of an ODE system: independent variable, two dependents, their
/// derivative symbols, and free parameters.
class VarContext {
 public:
  VarContext(std::string independent, std::pair<std::string, std::string> dependents,
             std::vector<std::string> parameters = {});

  /// x, (y, z), y', z' with optional parameters.
  static VarContext standard(std::vector<std::string> parameters = {});

  const std::string& independent() const { return independent_; }
  const std::pair<std::string, std::string>& dependents() const { return dependents_; }
  const std::string& dependent(int i) const { return i == 0 ? dependents_.first : dependents_.second; }
  const std::string& first_derivative(int i) const { return first_[i]; }
  const std::string& second_derivative(int i) const { return second_[i]; }
  const std::vector<std::string>& parameters() const { return parameters_; }

  VarContext with_parameters(const std::vector<std::string>& extra) const;

  bool declares(const std::string& name) const;
  /// Maps aliases (dy, dz) to canonical derivative names; returns nullopt if undeclared.
  std::optional<std::string> resolve(const std::string& name) const;

  /// (x, y, z)
  std::vector<std::string> base_symbols() const;
  /// (x, y, z, y', z')
  std::vector<std::string> jet1_symbols() const;

 private:
  void validate() const;

  std::string independent_;
  std::pair<std::string, std::string> dependents_;
  std::string first_[2];
  std::string second_[2];
  std::vector<std::string> parameters_;
};

struct ParseError : std::runtime_error {
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
  std::size_t position;
};

Expr parse(const std::string& text, const VarContext& ctx);
std::string print(const Expr& e);

/// Names of all symbols occurring in e.
std::set<std::string> free_symbols(const Expr& e);
bool depends_on(const Expr& e, const std::string& v);

/// Same node kind with new children (re-normalized).
Expr rebuild(const Expr& e, std::vector<Expr> args);

/// Replace symbols by expressions (simultaneously).
Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements);

/// Canonical form: expanded, like monomials collected, rational-function
/// denominators cancelled where an exact polynomial division exists.
Expr simplify(const Expr& e);

/// Exact partial derivative (simplified).
Expr differentiate(const Expr& e, const std::string& v);
Expr differentiate(const Expr& e, const std::string& v, int order);

/// d/dx e + sum_s (d e/ds) * chain[s]; chain maps symbols to their x-derivative.
Expr total_derivative(const Expr& e, const std::string& x, const std::map<std::string, Expr>& chain);

struct EvalError : std::runtime_error {
  EvalError(const std::string& msg, std::string subterm_)
      : std::runtime_error(msg + ": " + subterm_), subterm(std::move(subterm_)) {}
  std::string subterm;
};

using Bindings = std::unordered_map<std::string, double>;

/// IEEE double evaluation. Throws EvalError on unbound symbols and on domain
/// errors (division by zero, log of non-positive, even root of a negative).
double eval(const Expr& e, const Bindings& b);

/// Deterministic pseudo-random zero test over [-2,-0.1] U [0.1,2] per symbol.
/// Throws EvalError if every sample point hits a domain error.
bool is_zero_sampled(const Expr& e, const std::vector<std::string>& free, int n, std::uint64_t seed,
                     int* dropped = nullptr);

enum class ZeroMethod { Symbolic, Numeric };

struct ZeroVerdict {
  bool zero{false};
  ZeroMethod method{ZeroMethod::Symbolic};
  Expr simplified;
  int dropped_samples{0};
};

/// Seed used by sampled verdicts when none is passed (initially 0x5eed).
std::uint64_t default_sample_seed();
void set_default_sample_seed(std::uint64_t seed);

/// Simplify first; if the simplified form is nonzero but contains
/// transcendental or radical atoms, fall back to sampling.
ZeroVerdict zero_test(const Expr& e, std::uint64_t seed = default_sample_seed(), int samples = 40);

/// True iff simplify yields a rational function of symbols only (no
/// transcendental or radical atoms), i.e. a symbolic nonzero verdict is final.
bool is_rational_function(const Expr& simplified);

struct NotPolynomial : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Collected {
  std::vector<std::pair<Expr, Expr>> coefficients;  // (monomial, coefficient)
  Expr remainder;
  const Expr& operator[](const Expr& monomial) const;
};

/// e == sum coeff*monomial + remainder, coefficients free of vars.
/// Throws NotPolynomial if e is not polynomial in vars.
Collected collect(const Expr& e, const std::vector<Expr>& monomials, const std::vector<std::string>& vars);

/// All monomials in vars with their coefficients (vars-exponent vectors are
/// nonnegative integers). Throws NotPolynomial.
std::vector<std::pair<std::vector<int>, Expr>> polynomial_terms(const Expr& e,
                                                                const std::vector<std::string>& vars);

/// Monomial prod vars[i]^exps[i].
Expr monomial(const std::vector<std::string>& vars, const std::vector<int>& exps);

}  // namespace csa
