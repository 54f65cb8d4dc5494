#include "csa/expr.hpp"

#include <cmath>
#include <random>

namespace csa {

namespace {

double checked(double v, const Expr& e) {
  if (!std::isfinite(v)) throw EvalError("non-finite value", print(e));
  return v;
}

double eval_pow(double b, const Rational& r, const Expr& e) {
  if (is_integer(r)) {
    if (b == 0 && r < 0) throw EvalError("division by zero", print(e));
    return std::pow(b, numerator(r).convert_to<double>());
  }
  double p = to_double(r);
  if (b < 0) {
    // real odd roots of negative numbers
    if (denominator(r) % 2 == 0) throw EvalError("even root of a negative value", print(e));
    double mag = std::pow(-b, p);
    return numerator(r) % 2 == 0 ? mag : -mag;
  }
  if (b == 0 && r < 0) throw EvalError("division by zero", print(e));
  return std::pow(b, p);
}

// largest |additive term| seen, used for a relative zero tolerance
double eval_scale(const Expr& e, const Bindings& b) {
  if (e.kind() != Kind::Add) return std::fabs(eval(e, b));
  double m = 0;
  for (const auto& t : e.args()) m = std::max(m, std::fabs(eval(t, b)));
  return m;
}

}  // namespace

double eval(const Expr& e, const Bindings& b) {
  switch (e.kind()) {
    case Kind::Constant: return to_double(e.value());
    case Kind::Float: return e.node().fvalue;
    case Kind::Symbol: {
      auto it = b.find(e.name());
      if (it == b.end()) throw EvalError("unbound symbol", e.name());
      return it->second;
    }
    case Kind::Add: {
      double s = 0;
      for (const auto& a : e.args()) s += eval(a, b);
      return s;
    }
    case Kind::Mul: {
      double s = 1;
      for (const auto& a : e.args()) s *= eval(a, b);
      return checked(s, e);
    }
    case Kind::Neg: return -eval(e.arg(), b);
    case Kind::Div: {
      double d = eval(e.arg(1), b);
      if (d == 0) throw EvalError("division by zero", print(e));
      return checked(eval(e.arg(0), b) / d, e);
    }
    case Kind::Pow: return checked(eval_pow(eval(e.arg(), b), e.exponent(), e), e);
    case Kind::Exp: return checked(std::exp(eval(e.arg(), b)), e);
    case Kind::Log: {
      double a = eval(e.arg(), b);
      if (a <= 0) throw EvalError("log of a non-positive value", print(e));
      return std::log(a);
    }
    case Kind::Sin: return std::sin(eval(e.arg(), b));
    case Kind::Cos: return std::cos(eval(e.arg(), b));
    case Kind::Sqrt: {
      double a = eval(e.arg(), b);
      if (a < 0) throw EvalError("square root of a negative value", print(e));
      return std::sqrt(a);
    }
  }
  throw EvalError("unknown node", print(e));
}

bool is_zero_sampled(const Expr& e, const std::vector<std::string>& free, int n, std::uint64_t seed, int* dropped) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> mag(0.1, 2.0);
  std::bernoulli_distribution neg(0.5);
  int good = 0, bad = 0;
  const int max_attempts = 20 * n + 100;
  for (int attempt = 0; attempt < max_attempts && good < n; ++attempt) {
    Bindings b;
    for (const auto& s : free) b[s] = neg(rng) ? -mag(rng) : mag(rng);
    try {
      double v = eval(e, b);
      double scale = eval_scale(e, b);
      if (std::fabs(v) > 1e-9 * (1.0 + scale)) {
        if (dropped) *dropped = bad;
        return false;
      }
      ++good;
    } catch (const EvalError&) {
      ++bad;
    }
  }
  if (dropped) *dropped = bad;
  if (good == 0) throw EvalError("no sample point in the domain", print(e));
  return true;
}

}  // namespace csa
