#include "csa/expr.hpp"

#include <algorithm>
#include <functional>

namespace csa {

namespace {

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2)); }

std::size_t rational_hash(const Rational& r) {
  return mix(std::hash<std::string>{}(numerator(r).str()), std::hash<std::string>{}(denominator(r).str()));
}

Expr make_node(Kind k, std::vector<Expr> args, Rational value = 0, std::string name = {}, double fvalue = 0.0) {
  auto n = std::make_shared<Node>();
  n->kind = k;
  n->args = std::move(args);
  n->value = std::move(value);
  n->name = std::move(name);
  n->fvalue = fvalue;
  std::size_t h = static_cast<std::size_t>(k) * 1315423911u;
  switch (k) {
    case Kind::Constant: h = mix(h, rational_hash(n->value)); break;
    case Kind::Float: h = mix(h, std::hash<double>{}(n->fvalue)); break;
    case Kind::Symbol: h = mix(h, std::hash<std::string>{}(n->name)); break;
    case Kind::Pow: h = mix(h, rational_hash(n->value)); break;
    default: break;
  }
  for (const auto& a : n->args) h = mix(h, a.hash());
  n->hash = h;
  return Expr(std::shared_ptr<const Node>(std::move(n)));
}

const Expr& zero_expr() {
  static const Expr z = make_node(Kind::Constant, {}, 0);
  return z;
}

}  // namespace

Expr::Expr() : node_(zero_expr().node_) {}

bool operator==(const Expr& a, const Expr& b) {
  if (a.node_ == b.node_) return true;
  if (a.hash() != b.hash()) return false;
  return compare(a, b) == 0;
}

int compare(const Expr& a, const Expr& b) {
  if (&a.node() == &b.node()) return 0;
  if (a.kind() != b.kind()) return static_cast<int>(a.kind()) < static_cast<int>(b.kind()) ? -1 : 1;
  switch (a.kind()) {
    case Kind::Constant:
      if (a.value() == b.value()) return 0;
      return a.value() < b.value() ? -1 : 1;
    case Kind::Float:
      if (a.node().fvalue == b.node().fvalue) return 0;
      return a.node().fvalue < b.node().fvalue ? -1 : 1;
    case Kind::Symbol:
      return a.name().compare(b.name()) < 0 ? -1 : (a.name() == b.name() ? 0 : 1);
    case Kind::Pow:
      if (a.exponent() != b.exponent()) return a.exponent() < b.exponent() ? -1 : 1;
      break;
    default:
      break;
  }
  const auto& xa = a.args();
  const auto& xb = b.args();
  if (xa.size() != xb.size()) return xa.size() < xb.size() ? -1 : 1;
  for (std::size_t i = 0; i < xa.size(); ++i) {
    int c = compare(xa[i], xb[i]);
    if (c != 0) return c;
  }
  return 0;
}

Expr constant(const Rational& r) { return make_node(Kind::Constant, {}, r); }
Expr constant(std::int64_t n) { return make_node(Kind::Constant, {}, Rational(n)); }
Expr floating(double v) { return make_node(Kind::Float, {}, 0, {}, v); }
Expr symbol(const std::string& name) { return make_node(Kind::Symbol, {}, 0, name); }

Expr make_add(std::vector<Expr> terms) {
  std::vector<Expr> flat;
  Rational c = 0;
  int const_pos = -1;
  for (auto& t : terms) {
    if (t.kind() == Kind::Add) {
      for (const auto& s : t.args()) {
        if (s.is_constant()) {
          if (const_pos < 0) const_pos = static_cast<int>(flat.size());
          c += s.value();
        } else {
          flat.push_back(s);
        }
      }
    } else if (t.is_constant()) {
      if (const_pos < 0) const_pos = static_cast<int>(flat.size());
      c += t.value();
    } else {
      flat.push_back(std::move(t));
    }
  }
  if (c != 0) flat.insert(flat.begin() + const_pos, constant(c));
  if (flat.empty()) return constant(0);
  if (flat.size() == 1) return flat.front();
  return make_node(Kind::Add, std::move(flat));
}

Expr make_mul(std::vector<Expr> factors) {
  std::vector<Expr> nums, dens;
  Rational c = 1;
  bool negate = false;
  std::function<void(const Expr&)> absorb = [&](const Expr& f) {
    switch (f.kind()) {
      case Kind::Mul:
        for (const auto& s : f.args()) absorb(s);
        break;
      case Kind::Constant:
        c *= f.value();
        break;
      case Kind::Neg:
        negate = !negate;
        absorb(f.arg());
        break;
      case Kind::Div:
        absorb(f.arg(0));
        dens.push_back(f.arg(1));
        break;
      default:
        nums.push_back(f);
    }
  };
  for (const auto& f : factors) absorb(f);
  if (c == 0) return constant(0);
  if (negate) c = -c;
  Expr num;
  bool neg_out = false;
  if (c == -1 && !nums.empty()) {
    neg_out = true;
    c = 1;
  }
  if (c != 1 || nums.empty()) nums.insert(nums.begin(), constant(c));
  num = nums.size() == 1 ? nums.front() : make_node(Kind::Mul, std::move(nums));
  Expr result = num;
  if (!dens.empty()) result = make_div(num, dens.size() == 1 ? dens.front() : make_mul(dens));
  return neg_out ? make_neg(result) : result;
}

Expr make_neg(const Expr& a) {
  switch (a.kind()) {
    case Kind::Neg:
      return a.arg();
    case Kind::Constant:
      return constant(-a.value());
    case Kind::Mul:
      if (a.arg(0).is_constant()) {
        std::vector<Expr> f = a.args();
        f[0] = constant(-a.arg(0).value());
        if (f[0].is_one()) {
          f.erase(f.begin());
          return f.size() == 1 ? f.front() : make_node(Kind::Mul, std::move(f));
        }
        return make_node(Kind::Mul, std::move(f));
      }
      break;
    default:
      break;
  }
  return make_node(Kind::Neg, {a});
}

Expr make_div(const Expr& num, const Expr& den) {
  if (den.is_one()) return num;
  if (den.is_constant() && den.value() == -1) return make_neg(num);
  if (num.is_constant() && den.is_constant() && den.value() != 0) return constant(num.value() / den.value());
  if (num.kind() == Kind::Neg) return make_neg(make_div(num.arg(), den));
  if (den.kind() == Kind::Neg) return make_neg(make_div(num, den.arg()));
  if (den.is_constant() && den.value() < 0) return make_neg(make_div(num, constant(-den.value())));
  if (num.kind() == Kind::Div) return make_div(num.arg(0), make_mul({num.arg(1), den}));
  if (den.kind() == Kind::Div) return make_div(make_mul({num, den.arg(1)}), den.arg(0));
  if (num.kind() == Kind::Mul) {
    // a Mul numerator never carries a Neg or Div factor after make_mul
  }
  if (den.kind() == Kind::Mul) {
    for (const auto& f : den.args()) {
      if (f.kind() == Kind::Neg || f.kind() == Kind::Div) return make_div(num, make_mul(den.args()));
    }
  }
  return make_node(Kind::Div, {num, den});
}

Expr make_pow(const Expr& base, const Rational& exponent) {
  if (exponent == 0) return constant(1);
  if (exponent == 1) return base;
  if (base.is_constant() && is_integer(exponent)) {
    if (!(base.value() == 0 && exponent < 0)) {
      return constant(pow_int(base.value(), numerator(exponent).convert_to<std::int64_t>()));
    }
  }
  if (base.kind() == Kind::Pow && is_integer(exponent) && is_integer(base.exponent())) {
    return make_pow(base.arg(), base.exponent() * exponent);
  }
  return make_node(Kind::Pow, {base}, exponent);
}

Expr make_exp(const Expr& a) {
  if (a.is_zero()) return constant(1);
  return make_node(Kind::Exp, {a});
}
Expr make_log(const Expr& a) {
  if (a.is_one()) return constant(0);
  return make_node(Kind::Log, {a});
}
Expr make_sin(const Expr& a) {
  if (a.is_zero()) return constant(0);
  return make_node(Kind::Sin, {a});
}
Expr make_cos(const Expr& a) {
  if (a.is_zero()) return constant(1);
  return make_node(Kind::Cos, {a});
}
Expr make_sqrt(const Expr& a) {
  if (a.is_zero() || a.is_one()) return a;
  return make_node(Kind::Sqrt, {a});
}

Expr operator+(const Expr& a, const Expr& b) { return make_add({a, b}); }
Expr operator-(const Expr& a, const Expr& b) { return make_add({a, make_neg(b)}); }
Expr operator-(const Expr& a) { return make_neg(a); }
Expr operator*(const Expr& a, const Expr& b) { return make_mul({a, b}); }
Expr operator/(const Expr& a, const Expr& b) { return make_div(a, b); }
Expr pow(const Expr& base, const Rational& exponent) { return make_pow(base, exponent); }

// ---------------------------------------------------------------------------

VarContext::VarContext(std::string independent, std::pair<std::string, std::string> dependents,
                       std::vector<std::string> parameters)
    : independent_(std::move(independent)), dependents_(std::move(dependents)), parameters_(std::move(parameters)) {
  first_[0] = dependents_.first + "'";
  first_[1] = dependents_.second + "'";
  second_[0] = dependents_.first + "''";
  second_[1] = dependents_.second + "''";
  validate();
}

VarContext VarContext::standard(std::vector<std::string> parameters) {
  return VarContext("x", {"y", "z"}, std::move(parameters));
}

VarContext VarContext::with_parameters(const std::vector<std::string>& extra) const {
  std::vector<std::string> p = parameters_;
  for (const auto& e : extra) {
    if (std::find(p.begin(), p.end(), e) == p.end()) p.push_back(e);
  }
  return VarContext(independent_, dependents_, p);
}

void VarContext::validate() const {
  std::vector<std::string> all = {independent_, dependents_.first, dependents_.second,
                                  first_[0],    first_[1],         second_[0],
                                  second_[1]};
  all.insert(all.end(), parameters_.begin(), parameters_.end());
  std::set<std::string> seen;
  for (const auto& n : all) {
    if (n.empty()) throw std::invalid_argument("empty variable name");
    if (!seen.insert(n).second) throw std::invalid_argument("duplicate variable name '" + n + "'");
  }
  for (const auto& p : parameters_) {
    if (p == "d" + dependents_.first || p == "d" + dependents_.second) {
      throw std::invalid_argument("parameter '" + p + "' collides with a derivative alias");
    }
  }
}

bool VarContext::declares(const std::string& name) const { return resolve(name).has_value(); }

std::optional<std::string> VarContext::resolve(const std::string& name) const {
  if (name == independent_ || name == dependents_.first || name == dependents_.second) return name;
  for (int i = 0; i < 2; ++i) {
    if (name == first_[i] || name == second_[i]) return name;
    if (name == "d" + dependent(i)) return first_[i];
    if (name == "dd" + dependent(i)) return second_[i];
  }
  if (std::find(parameters_.begin(), parameters_.end(), name) != parameters_.end()) return name;
  return std::nullopt;
}

std::vector<std::string> VarContext::base_symbols() const {
  return {independent_, dependents_.first, dependents_.second};
}

std::vector<std::string> VarContext::jet1_symbols() const {
  return {independent_, dependents_.first, dependents_.second, first_[0], first_[1]};
}

// ---------------------------------------------------------------------------

namespace {
void collect_symbols(const Expr& e, std::set<std::string>& out) {
  if (e.is_symbol()) {
    out.insert(e.name());
    return;
  }
  for (const auto& a : e.args()) collect_symbols(a, out);
}
}  // namespace

std::set<std::string> free_symbols(const Expr& e) {
  std::set<std::string> s;
  collect_symbols(e, s);
  return s;
}

bool depends_on(const Expr& e, const std::string& v) {
  if (e.is_symbol()) return e.name() == v;
  for (const auto& a : e.args()) {
    if (depends_on(a, v)) return true;
  }
  return false;
}

Expr rebuild(const Expr& e, std::vector<Expr> args) {
  switch (e.kind()) {
    case Kind::Add: return make_add(std::move(args));
    case Kind::Mul: return make_mul(std::move(args));
    case Kind::Neg: return make_neg(args.at(0));
    case Kind::Div: return make_div(args.at(0), args.at(1));
    case Kind::Pow: return make_pow(args.at(0), e.exponent());
    case Kind::Exp: return make_exp(args.at(0));
    case Kind::Log: return make_log(args.at(0));
    case Kind::Sin: return make_sin(args.at(0));
    case Kind::Cos: return make_cos(args.at(0));
    case Kind::Sqrt: return make_sqrt(args.at(0));
    default: return e;
  }
}

Expr substitute(const Expr& e, const std::map<std::string, Expr>& replacements) {
  if (replacements.empty()) return e;
  if (e.is_symbol()) {
    auto it = replacements.find(e.name());
    return it == replacements.end() ? e : it->second;
  }
  if (e.args().empty()) return e;
  std::vector<Expr> args;
  args.reserve(e.args().size());
  bool changed = false;
  for (const auto& a : e.args()) {
    args.push_back(substitute(a, replacements));
    if (args.back() != a) changed = true;
  }
  return changed ? rebuild(e, std::move(args)) : e;
}

Expr monomial(const std::vector<std::string>& vars, const std::vector<int>& exps) {
  std::vector<Expr> f;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (exps.at(i) != 0) f.push_back(make_pow(symbol(vars[i]), exps[i]));
  }
  if (f.empty()) return constant(1);
  return f.size() == 1 ? f.front() : make_mul(f);
}

}  // namespace csa
