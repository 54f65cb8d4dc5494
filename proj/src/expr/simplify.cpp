#include "poly.hpp"

#include <algorithm>

namespace csa {

using detail::AtomKind;
using detail::Canon;
using detail::Fraction;
using detail::Poly;

Expr simplify(const Expr& e) {
  Canon c;
  return c.render(c.cancel(c.to_poly(e)));
}

Expr differentiate(const Expr& e, const std::string& v) {
  Canon c;
  return c.render(c.cancel(c.diff(c.to_poly(e), v)));
}

Expr differentiate(const Expr& e, const std::string& v, int order) {
  Canon c;
  Poly p = c.to_poly(e);
  for (int i = 0; i < order; ++i) p = c.diff(p, v);
  return c.render(c.cancel(p));
}

Expr total_derivative(const Expr& e, const std::string& x, const std::map<std::string, Expr>& chain) {
  Canon c;
  Poly p = c.to_poly(e);
  Poly out = c.diff(p, x);
  for (const auto& [s, ds] : chain) {
    if (s == x || !depends_on(e, s)) continue;
    out = c.add(out, c.mul(c.diff(p, s), c.to_poly(ds)));
  }
  return c.render(c.cancel(out));
}

bool is_rational_function(const Expr& simplified) {
  Canon c;
  return c.is_rational(c.to_poly(simplified));
}

std::vector<std::pair<std::vector<int>, Expr>> polynomial_terms(const Expr& e, const std::vector<std::string>& vars) {
  Canon c;
  Fraction f = c.cancel(c.to_poly(e));
  for (const auto& [atom, k] : f.denominator) {
    for (const auto& v : vars) {
      if (depends_on(atom, v)) throw NotPolynomial("denominator depends on " + v + ": " + print(atom));
    }
  }
  std::map<std::vector<int>, Poly> groups;
  for (const auto& [m, coef] : f.numerator) {
    std::vector<int> exps(vars.size(), 0);
    detail::Monomial rest;
    for (const auto& fac : m) {
      auto it = std::find_if(vars.begin(), vars.end(), [&](const std::string& v) { return fac.atom.is_symbol(v); });
      if (it != vars.end()) {
        if (!is_integer(fac.exp) || fac.exp < 0) {
          throw NotPolynomial("non-polynomial power of " + *it + " in " + print(e));
        }
        exps[static_cast<std::size_t>(it - vars.begin())] = numerator(fac.exp).convert_to<int>();
        continue;
      }
      for (const auto& v : vars) {
        if (depends_on(fac.atom, v)) throw NotPolynomial("non-polynomial dependence on " + v + ": " + print(fac.atom));
      }
      rest.push_back(fac);
    }
    groups[exps].emplace(std::move(rest), coef);
  }
  std::vector<std::pair<std::vector<int>, Expr>> out;
  for (const auto& [exps, p] : groups) {
    Fraction g{p, f.denominator};
    out.emplace_back(exps, simplify(c.render(g)));
  }
  return out;
}

const Expr& Collected::operator[](const Expr& m) const {
  for (const auto& [mono, coef] : coefficients) {
    if (mono == m) return coef;
  }
  throw std::out_of_range("monomial not collected: " + print(m));
}

Collected collect(const Expr& e, const std::vector<Expr>& monomials, const std::vector<std::string>& vars) {
  auto terms = polynomial_terms(e, vars);
  Collected out;
  std::vector<bool> used(terms.size(), false);
  for (const auto& m : monomials) {
    Expr coef = constant(0);
    Expr target = simplify(m);
    for (std::size_t i = 0; i < terms.size(); ++i) {
      if (used[i]) continue;
      if (simplify(monomial(vars, terms[i].first)) == target) {
        coef = terms[i].second;
        used[i] = true;
        break;
      }
    }
    out.coefficients.emplace_back(m, coef);
  }
  std::vector<Expr> rest;
  for (std::size_t i = 0; i < terms.size(); ++i) {
    if (!used[i]) rest.push_back(make_mul({terms[i].second, monomial(vars, terms[i].first)}));
  }
  out.remainder = rest.empty() ? constant(0) : simplify(make_add(std::move(rest)));
  return out;
}

namespace {
std::uint64_t g_sample_seed = 0x5eed;
}

std::uint64_t default_sample_seed() { return g_sample_seed; }
void set_default_sample_seed(std::uint64_t seed) { g_sample_seed = seed; }

ZeroVerdict zero_test(const Expr& e, std::uint64_t seed, int samples) {
  ZeroVerdict v;
  v.simplified = simplify(e);
  if (v.simplified.is_zero()) {
    v.zero = true;
    return v;
  }
  if (is_rational_function(v.simplified)) return v;
  v.method = ZeroMethod::Numeric;
  auto fs = free_symbols(v.simplified);
  std::vector<std::string> free(fs.begin(), fs.end());
  v.zero = is_zero_sampled(v.simplified, free, samples, seed, &v.dropped_samples);
  return v;
}

}  // namespace csa
