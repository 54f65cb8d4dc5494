#include "csa/rational.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace csa {

std::string to_string(const Rational& r) {
  if (is_integer(r)) return numerator(r).str();
  return numerator(r).str() + "/" + denominator(r).str();
}

Rational rational_from_double(double v) {
  if (!std::isfinite(v)) throw std::domain_error("non-finite value cannot be made exact");
  int exp = 0;
  double mant = std::frexp(v, &exp);
  // mant * 2^53 is an exact integer
  auto m = static_cast<std::int64_t>(std::ldexp(mant, 53));
  exp -= 53;
  Rational r{BigInt(m)};
  if (exp > 0) {
    r *= Rational(BigInt(1) << exp);
  } else if (exp < 0) {
    r /= Rational(BigInt(1) << (-exp));
  }
  return r;
}

std::optional<Rational> rationalize(double v, std::int64_t max_den, double tol) {
  if (!std::isfinite(v)) return std::nullopt;
  // continued fraction convergents
  double x = v;
  std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
  for (int it = 0; it < 64; ++it) {
    double a = std::floor(x);
    if (std::fabs(a) > 1e15) break;
    auto ai = static_cast<std::int64_t>(a);
    std::int64_t h2 = ai * h1 + h0;
    std::int64_t k2 = ai * k1 + k0;
    if (k2 > max_den) break;
    h0 = h1; h1 = h2; k0 = k1; k1 = k2;
    if (std::fabs(static_cast<double>(h1) / static_cast<double>(k1) - v) <= tol) {
      return Rational(BigInt(h1), BigInt(k1));
    }
    double frac = x - a;
    if (frac < 1e-15) break;
    x = 1.0 / frac;
  }
  if (k1 != 0 && std::fabs(static_cast<double>(h1) / static_cast<double>(k1) - v) <= tol) {
    return Rational(BigInt(h1), BigInt(k1));
  }
  return std::nullopt;
}

Rational floor_rational(const Rational& r) {
  BigInt n = numerator(r), d = denominator(r);
  BigInt q = n / d;  // truncates toward zero
  if (n < 0 && q * d != n) q -= 1;
  return Rational(q);
}

Rational pow_int(const Rational& r, std::int64_t n) {
  if (n == 0) return 1;
  if (n < 0) {
    if (r == 0) throw std::domain_error("zero to a negative power");
    return pow_int(1 / r, -n);
  }
  Rational result = 1, base = r;
  while (n > 0) {
    if (n & 1) result *= base;
    base *= base;
    n >>= 1;
  }
  return result;
}

}  // namespace csa
