#include "poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace csa::detail {

namespace {

int cmp_rational(const Rational& a, const Rational& b) { return a == b ? 0 : (a < b ? -1 : 1); }

// Lexicographic monomial order on exponent vectors (absent atom = 0).
int lex_compare(const Monomial& a, const Monomial& b) {
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    int c;
    if (i == a.size()) {
      c = 1;
    } else if (j == b.size()) {
      c = -1;
    } else {
      c = compare(a[i].atom, b[j].atom);
    }
    if (c == 0) {
      int e = cmp_rational(a[i].exp, b[j].exp);
      if (e != 0) return e;
      ++i;
      ++j;
    } else if (c < 0) {
      // atom only in a
      return a[i].exp > 0 ? 1 : -1;
    } else {
      return b[j].exp > 0 ? -1 : 1;
    }
  }
  return 0;
}

void add_term(Poly& p, const Monomial& m, const Rational& c) {
  if (c == 0) return;
  auto it = p.find(m);
  if (it == p.end()) {
    p.emplace(m, c);
  } else {
    it->second += c;
    if (it->second == 0) p.erase(it);
  }
}

Monomial raw_mul(const Monomial& a, const Monomial& b) {
  Monomial out;
  std::size_t i = 0, j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && compare(a[i].atom, b[j].atom) < 0)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || compare(b[j].atom, a[i].atom) < 0) {
      out.push_back(b[j++]);
    } else {
      Rational e = a[i].exp + b[j].exp;
      if (e != 0) out.push_back({a[i].atom, e});
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<std::pair<BigInt, int>> factorize(BigInt n) {
  std::vector<std::pair<BigInt, int>> out;
  for (BigInt p = 2; p * p <= n && p < 100000; ++p) {
    int k = 0;
    while (n % p == 0) {
      n /= p;
      ++k;
    }
    if (k) out.emplace_back(p, k);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

}  // namespace

bool MonoLess::operator()(const Monomial& a, const Monomial& b) const {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i) {
    int c = compare(a[i].atom, b[i].atom);
    if (c != 0) return c < 0;
    int e = cmp_rational(a[i].exp, b[i].exp);
    if (e != 0) return e < 0;
  }
  return a.size() < b.size();
}

AtomKind atom_kind(const Expr& atom) {
  switch (atom.kind()) {
    case Kind::Symbol: return AtomKind::Symbol;
    case Kind::Exp: return AtomKind::Exp;
    case Kind::Log: return AtomKind::Log;
    case Kind::Sin: return AtomKind::Sin;
    case Kind::Cos: return AtomKind::Cos;
    case Kind::Constant: return AtomKind::Prime;
    default: return AtomKind::Base;
  }
}

Poly constant_poly(const Rational& c) {
  Poly p;
  if (c != 0) p.emplace(Monomial{}, c);
  return p;
}

Poly atom_poly(const Expr& atom, const Rational& e) {
  Poly p;
  p.emplace(Monomial{{atom, e}}, Rational(1));
  return p;
}

bool atom_depends_on(const Expr& atom, const std::string& v) { return depends_on(atom, v); }

// ---------------------------------------------------------------------------

Poly Canon::add(const Poly& a, const Poly& b) const {
  Poly out = a;
  for (const auto& [m, c] : b) add_term(out, m, c);
  return out;
}

Poly Canon::scale(const Poly& a, const Rational& c) const {
  if (c == 0) return {};
  Poly out;
  for (const auto& [m, k] : a) out.emplace(m, k * c);
  return out;
}

Poly Canon::mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ma, ca] : a) {
    for (const auto& [mb, cb] : b) {
      Poly t = mul_mono(ma, mb);
      Rational k = ca * cb;
      for (const auto& [m, c] : t) add_term(out, m, c * k);
    }
  }
  return out;
}

Poly Canon::mul_mono(const Monomial& a, const Monomial& b) {
  Monomial m = raw_mul(a, b);
  bool needs = false;
  int exps = 0;
  for (const auto& f : m) {
    switch (atom_kind(f.atom)) {
      case AtomKind::Exp:
        ++exps;
        if (f.exp != 1) needs = true;
        break;
      case AtomKind::Prime:
        if (f.exp <= 0 || f.exp >= 1) needs = true;
        break;
      case AtomKind::Base:
        if (f.exp >= 1) needs = true;
        break;
      default:
        break;
    }
  }
  if (exps > 1) needs = true;
  if (!needs) {
    Poly p;
    p.emplace(std::move(m), Rational(1));
    return p;
  }
  std::map<Expr, Rational, ExprLess> f;
  for (const auto& x : m) f[x.atom] += x.exp;
  return normalize(std::move(f));
}

Poly Canon::normalize(std::map<Expr, Rational, ExprLess> factors) {
  Rational coef = 1;
  Monomial mono;
  Poly exp_arg;
  bool have_exp = false;
  std::vector<Poly> extra;
  for (auto& [atom, e] : factors) {
    if (e == 0) continue;
    switch (atom_kind(atom)) {
      case AtomKind::Exp: {
        have_exp = true;
        exp_arg = add(exp_arg, scale(to_poly(atom.arg()), e));
        break;
      }
      case AtomKind::Prime: {
        Rational n = floor_rational(e);
        Rational f = e - n;
        coef *= pow_int(atom.value(), numerator(n).convert_to<std::int64_t>());
        if (f != 0) mono.push_back({atom, f});
        break;
      }
      case AtomKind::Base: {
        if (e >= 1) {
          Rational n = floor_rational(e);
          Rational f = e - n;
          Poly b = base_poly(atom);
          extra.push_back(power(b, n));
          if (f != 0) mono.push_back({atom, f});
        } else {
          mono.push_back({atom, e});
        }
        break;
      }
      default:
        mono.push_back({atom, e});
    }
  }
  // factors map is ordered by atom, so mono is sorted already
  Poly out;
  out.emplace(std::move(mono), coef);
  if (have_exp) out = mul(out, exp_of(exp_arg));
  for (const auto& x : extra) out = mul(out, x);
  return out;
}

Poly Canon::exp_of(const Poly& arg) {
  Poly rest;
  Poly out = constant_poly(1);
  for (const auto& [m, c] : arg) {
    if (m.size() == 1 && m[0].exp == 1 && atom_kind(m[0].atom) == AtomKind::Log) {
      out = mul(out, power(to_poly(m[0].atom.arg()), c));
    } else {
      rest.emplace(m, c);
    }
  }
  if (rest.empty()) return out;
  Expr atom = make_exp(to_expr(rest));
  Poly a;
  a.emplace(Monomial{{atom, 1}}, Rational(1));
  // direct product: out never contains an exp atom here unless a log argument did
  return mul(out, a);
}

Poly Canon::log_of(const Poly& arg) {
  if (arg.empty()) throw std::domain_error("log(0) in simplification");
  if (arg.size() == 1) {
    const auto& [m, c] = *arg.begin();
    if (c == 1 && m.empty()) return {};
    if (c == 1 && m.size() == 1 && m[0].exp == 1 && atom_kind(m[0].atom) == AtomKind::Exp) {
      return to_poly(m[0].atom.arg());
    }
  }
  return atom_poly(make_log(to_expr(arg)));
}

Poly Canon::trig_of(Kind k, const Poly& arg) {
  if (arg.empty()) return k == Kind::Sin ? Poly{} : constant_poly(1);
  Poly a = arg;
  Rational sign = 1;
  if (a.rbegin()->second < 0) {
    a = scale(a, -1);
    if (k == Kind::Sin) sign = -1;
  }
  Expr e = to_expr(a);
  Expr atom = k == Kind::Sin ? make_sin(e) : make_cos(e);
  return scale(atom_poly(atom), sign);
}

Poly Canon::positive_rational_power(const Rational& c, const Rational& r) {
  // c > 0, r non-integer
  std::map<Expr, Rational, ExprLess> f;
  for (auto [p, k] : factorize(numerator(c))) f[constant(Rational(p))] += Rational(k) * r;
  for (auto [p, k] : factorize(denominator(c))) f[constant(Rational(p))] -= Rational(k) * r;
  if (f.empty()) return constant_poly(1);
  return normalize(std::move(f));
}

Poly Canon::single_term_power(const Rational& c, const Monomial& m, const Rational& r) {
  if (is_integer(r)) {
    auto n = numerator(r).convert_to<std::int64_t>();
    std::map<Expr, Rational, ExprLess> f;
    for (const auto& x : m) f[x.atom] += x.exp * r;
    Poly out = normalize(std::move(f));
    return scale(out, pow_int(c, n));
  }
  Poly coef;
  if (c > 0) {
    coef = positive_rational_power(c, r);
  } else {
    bool odd_root = denominator(r) % 2 == 1;
    if (!odd_root) {
      // even root of a negative quantity: keep the whole base opaque
      Poly whole;
      whole.emplace(m, c);
      Expr atom = to_expr(whole);
      bases_[atom] = whole;
      return normalize({{atom, r}});
    }
    coef = positive_rational_power(-c, r);
    if (numerator(r) % 2 != 0) coef = scale(coef, -1);
  }
  std::map<Expr, Rational, ExprLess> f;
  Monomial opaque;
  for (const auto& x : m) {
    AtomKind k = atom_kind(x.atom);
    if (k == AtomKind::Exp || k == AtomKind::Prime || numerator(x.exp) % 2 != 0) {
      f[x.atom] += x.exp * r;
    } else {
      opaque.push_back(x);
    }
  }
  Poly out = normalize(std::move(f));
  if (!opaque.empty()) {
    Poly whole;
    whole.emplace(opaque, Rational(1));
    Expr atom = to_expr(whole);
    bases_[atom] = whole;
    out = mul(out, normalize({{atom, r}}));
  }
  return mul(out, coef);
}

Poly Canon::power(const Poly& p, const Rational& r) {
  if (r == 0) return constant_poly(1);
  if (r == 1) return p;
  if (p.empty()) {
    if (r > 0) return {};
    throw std::domain_error("division by zero in simplification");
  }
  if (is_integer(r) && r > 0) {
    auto n = numerator(r).convert_to<std::int64_t>();
    if (p.size() == 1) return single_term_power(p.begin()->second, p.begin()->first, r);
    Poly result = constant_poly(1), base = p;
    while (n > 0) {
      if (n & 1) result = mul(result, base);
      n >>= 1;
      if (n) base = mul(base, base);
    }
    return result;
  }
  if (p.size() == 1) return single_term_power(p.begin()->second, p.begin()->first, r);

  // numeric content with the sign of the leading term
  BigInt g = 0, l = 1;
  for (const auto& [m, c] : p) {
    g = boost::multiprecision::gcd(g, boost::multiprecision::abs(numerator(c)));
    l = boost::multiprecision::lcm(l, denominator(c));
  }
  Rational content(g, l);
  if (p.rbegin()->second < 0) content = -content;
  if (!is_integer(r) && content < 0) content = -content;

  // monomial content: minimal exponent of each non-exp atom over all terms
  std::map<Expr, Rational, ExprLess> minexp;
  bool first = true;
  for (const auto& [m, c] : p) {
    std::map<Expr, Rational, ExprLess> here;
    for (const auto& f : m) {
      if (atom_kind(f.atom) != AtomKind::Exp) here[f.atom] = f.exp;
    }
    if (first) {
      minexp = here;
      for (auto& [a, e] : minexp) e = std::min(e, Rational(0));
      first = false;
      // atoms absent in the first term still count as exponent 0
    } else {
      for (auto& [a, e] : minexp) {
        auto it = here.find(a);
        e = std::min(e, it == here.end() ? Rational(0) : it->second);
      }
      for (const auto& [a, e] : here) {
        if (!minexp.count(a)) minexp[a] = std::min(e, Rational(0));
      }
    }
  }
  // atoms with positive minimal exponent (present in every term)
  for (const auto& [m0, c0] : p) {
    for (const auto& f : m0) {
      if (atom_kind(f.atom) == AtomKind::Exp) continue;
      Rational lo = f.exp;
      bool everywhere = true;
      for (const auto& [m, c] : p) {
        auto it = std::find_if(m.begin(), m.end(), [&](const Factor& x) { return x.atom == f.atom; });
        if (it == m.end()) {
          everywhere = false;
          break;
        }
        lo = std::min(lo, it->exp);
      }
      if (everywhere && lo > 0) minexp[f.atom] = lo;
    }
    break;
  }
  Monomial content_mono;
  for (const auto& [a, e] : minexp) {
    if (e != 0) content_mono.push_back({a, e});
  }
  Monomial inv;
  for (const auto& f : content_mono) inv.push_back({f.atom, -f.exp});
  Poly b;
  for (const auto& [m, c] : p) {
    for (const auto& [mm, cc] : mul_mono(m, inv)) add_term(b, mm, cc * c / content);
  }

  Poly out = single_term_power(content, content_mono, r);
  if (is_integer(r) && r > 0) return mul(out, power(b, r));
  Expr atom = to_expr(b);
  bases_[atom] = b;
  return mul(out, normalize({{atom, r}}));
}

Poly Canon::base_poly(const Expr& atom) {
  auto it = bases_.find(atom);
  if (it != bases_.end()) return it->second;
  Poly b = to_poly(atom);
  bases_[atom] = b;
  return b;
}

Poly Canon::to_poly(const Expr& e) {
  auto it = memo_.find(e);
  if (it != memo_.end()) return it->second;
  Poly out;
  switch (e.kind()) {
    case Kind::Constant:
      out = constant_poly(e.value());
      break;
    case Kind::Float:
      out = constant_poly(rational_from_double(e.node().fvalue));
      break;
    case Kind::Symbol:
      out = atom_poly(e);
      break;
    case Kind::Add:
      for (const auto& a : e.args()) out = add(out, to_poly(a));
      break;
    case Kind::Mul:
      out = constant_poly(1);
      for (const auto& a : e.args()) out = mul(out, to_poly(a));
      break;
    case Kind::Neg:
      out = scale(to_poly(e.arg()), -1);
      break;
    case Kind::Div: {
      // distribute over the denominator's factors so b^k reparses as atom b
      out = to_poly(e.arg(0));
      const Expr& d = e.arg(1);
      std::vector<Expr> fs = d.kind() == Kind::Mul ? d.args() : std::vector<Expr>{d};
      for (const auto& f : fs) {
        if (f.kind() == Kind::Pow && is_integer(f.exponent())) {
          out = mul(out, power(to_poly(f.arg()), -f.exponent()));
        } else {
          out = mul(out, power(to_poly(f), -1));
        }
      }
      break;
    }
    case Kind::Pow:
      out = power(to_poly(e.arg()), e.exponent());
      break;
    case Kind::Sqrt:
      out = power(to_poly(e.arg()), Rational(1, 2));
      break;
    case Kind::Exp:
      out = exp_of(to_poly(e.arg()));
      break;
    case Kind::Log:
      out = log_of(to_poly(e.arg()));
      break;
    case Kind::Sin:
    case Kind::Cos:
      out = trig_of(e.kind(), to_poly(e.arg()));
      break;
  }
  memo_.emplace(e, out);
  return out;
}

Expr Canon::render_term(const Monomial& m, const Rational& c) {
  std::vector<Expr> num{constant(c)}, den;
  for (const auto& f : m) {
    if (f.exp < 0 && atom_kind(f.atom) != AtomKind::Exp) {
      den.push_back(make_pow(f.atom, -f.exp));
    } else {
      num.push_back(make_pow(f.atom, f.exp));
    }
  }
  Expr n = make_mul(num);
  if (den.empty()) return n;
  return make_div(n, den.size() == 1 ? den.front() : make_mul(den));
}

Expr Canon::to_expr(const Poly& p) {
  if (p.empty()) return constant(0);
  std::vector<Expr> terms;
  terms.reserve(p.size());
  for (auto it = p.rbegin(); it != p.rend(); ++it) terms.push_back(render_term(it->first, it->second));
  return make_add(std::move(terms));
}

Poly Canon::diff(const Poly& p, const std::string& v) {
  Poly out;
  for (const auto& [m, c] : p) {
    for (std::size_t i = 0; i < m.size(); ++i) {
      const Factor& f = m[i];
      if (!atom_depends_on(f.atom, v)) continue;
      Poly d;  // derivative of the atom, times the rest of the monomial
      Monomial rest = m;
      AtomKind k = atom_kind(f.atom);
      if (k == AtomKind::Exp) {
        d = diff(to_poly(f.atom.arg()), v);
        Poly self;
        self.emplace(m, c);
        out = add(out, mul(self, d));
        continue;
      }
      rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
      std::map<Expr, Rational, ExprLess> fs;
      for (const auto& x : rest) fs[x.atom] += x.exp;
      fs[f.atom] += f.exp - 1;
      Poly lowered = scale(normalize(std::move(fs)), c * f.exp);
      switch (k) {
        case AtomKind::Symbol:
          d = constant_poly(1);
          break;
        case AtomKind::Log: {
          Poly a = to_poly(f.atom.arg());
          d = mul(diff(a, v), power(a, -1));
          break;
        }
        case AtomKind::Sin: {
          Poly a = to_poly(f.atom.arg());
          d = mul(diff(a, v), trig_of(Kind::Cos, a));
          break;
        }
        case AtomKind::Cos: {
          Poly a = to_poly(f.atom.arg());
          d = scale(mul(diff(a, v), trig_of(Kind::Sin, a)), -1);
          break;
        }
        case AtomKind::Base:
          d = diff(base_poly(f.atom), v);
          break;
        default:
          break;
      }
      out = add(out, mul(lowered, d));
    }
  }
  return out;
}

std::optional<Poly> Canon::divide_exact(const Poly& n, const Poly& b) {
  if (b.empty()) return std::nullopt;
  for (const auto& [m, c] : b) {
    for (const auto& f : m) {
      AtomKind k = atom_kind(f.atom);
      if (k == AtomKind::Exp || k == AtomKind::Prime || k == AtomKind::Base) return std::nullopt;
      if (!is_integer(f.exp) || f.exp < 0) return std::nullopt;
    }
  }
  auto lead = [](const Poly& p) {
    auto best = p.begin();
    for (auto it = p.begin(); it != p.end(); ++it) {
      if (lex_compare(it->first, best->first) > 0) best = it;
    }
    return best;
  };
  auto lb = lead(b);
  Poly r = n, q;
  for (int guard = 0; !r.empty(); ++guard) {
    if (guard > 20000) return std::nullopt;
    auto lr = lead(r);
    Monomial inv;
    for (const auto& f : lb->first) inv.push_back({f.atom, -f.exp});
    Monomial qm = raw_mul(lr->first, inv);
    for (const auto& f : lb->first) {
      auto it = std::find_if(qm.begin(), qm.end(), [&](const Factor& x) { return x.atom == f.atom; });
      Rational e = it == qm.end() ? Rational(0) : it->exp;
      if (e < 0) return std::nullopt;
    }
    Rational qc = lr->second / lb->second;
    add_term(q, qm, qc);
    for (const auto& [m, c] : b) add_term(r, raw_mul(qm, m), -qc * c);
  }
  return q;
}

Fraction Canon::cancel(const Poly& p) {
  std::map<Expr, Rational, ExprLess> minexp;
  for (const auto& [m, c] : p) {
    for (const auto& f : m) {
      if (atom_kind(f.atom) == AtomKind::Base && f.exp < 0) {
        auto it = minexp.find(f.atom);
        if (it == minexp.end() || f.exp < it->second) minexp[f.atom] = f.exp;
      }
    }
  }
  Fraction out;
  out.numerator = p;
  if (p.empty()) return out;
  for (const auto& [atom, e] : minexp) {
    Rational k = -floor_rational(e);  // smallest integer with e + k >= 0
    // shift the atom's exponent without expanding it into its base first
    Poly shifted;
    Monomial shift{{atom, k}};
    for (const auto& [m, c] : out.numerator) {
      for (const auto& [mm, cc] : mul_mono(raw_mul(m, shift), {})) add_term(shifted, mm, cc * c);
    }
    out.numerator = std::move(shifted);
    Poly b = base_poly(atom);
    while (k > 0) {
      auto q = divide_exact(out.numerator, b);
      if (!q) break;
      out.numerator = std::move(*q);
      k -= 1;
    }
    if (k > 0) out.denominator.emplace_back(atom, k);
  }
  return out;
}

Expr Canon::render(const Fraction& f) {
  Expr n = to_expr(f.numerator);
  if (f.denominator.empty() || f.numerator.empty()) return n;
  std::vector<Expr> d;
  for (const auto& [atom, k] : f.denominator) d.push_back(make_pow(atom, k));
  return make_div(n, d.size() == 1 ? d.front() : make_mul(d));
}

bool Canon::is_rational(const Poly& p) {
  for (const auto& [m, c] : p) {
    for (const auto& f : m) {
      if (!is_integer(f.exp)) return false;
      AtomKind k = atom_kind(f.atom);
      if (k == AtomKind::Symbol) continue;
      if (k == AtomKind::Base && is_rational(base_poly(f.atom))) continue;
      return false;
    }
  }
  return true;
}

}  // namespace csa::detail
