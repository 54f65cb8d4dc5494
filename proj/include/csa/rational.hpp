#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <optional>
#include <string>

namespace csa {

using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

inline bool is_integer(const Rational& r) { return denominator(r) == 1; }

inline double to_double(const Rational& r) { return r.convert_to<double>(); }

std::string to_string(const Rational& r);

/// Exact rational value of a finite double.
Rational rational_from_double(double v);

/// Best rational approximation with denominator <= max_den, if it is within tol of v.
std::optional<Rational> rationalize(double v, std::int64_t max_den = 1000, double tol = 1e-9);

/// floor(r) as an integer-valued rational.
Rational floor_rational(const Rational& r);

/// r^n for integer n (r != 0 when n < 0).
Rational pow_int(const Rational& r, std::int64_t n);

}  // namespace csa
