#include "csa/expr.hpp"

#include <cctype>
#include <sstream>

namespace csa {

namespace {

// Grammar:
//   expr    := term (('+' | '-') term)*
//   term    := unary (('*' | '/') unary)*
//   unary   := '-' unary | '+' unary | power
//   power   := primary ('^' unary)?
//   primary := number | name | name '(' expr ')' | '(' expr ')'
class Parser {
 public:
  Parser(const std::string& text, const VarContext& ctx) : s_(text), ctx_(ctx) {}

  Expr run() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("empty expression", pos_);
    Expr e = expr();
    skip();
    if (pos_ < s_.size()) throw ParseError(std::string("unexpected character '") + s_[pos_] + "'", pos_);
    return e;
  }

 private:
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  bool accept(char c) {
    skip();
    if (pos_ < s_.size() && s_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }
  void expect(char c) {
    if (!accept(c)) {
      if (pos_ >= s_.size()) throw ParseError(std::string("expected '") + c + "' but input ended", pos_);
      throw ParseError(std::string("expected '") + c + "'", pos_);
    }
  }

  Expr expr() {
    std::vector<Expr> terms{term()};
    for (;;) {
      if (accept('+')) {
        terms.push_back(term());
      } else if (accept('-')) {
        terms.push_back(make_neg(term()));
      } else {
        break;
      }
    }
    return terms.size() == 1 ? terms.front() : make_add(std::move(terms));
  }

  Expr term() {
    Expr acc = unary();
    for (;;) {
      if (accept('*')) {
        acc = make_mul({acc, unary()});
      } else if (accept('/')) {
        acc = make_div(acc, unary());
      } else {
        break;
      }
    }
    return acc;
  }

  Expr unary() {
    if (accept('-')) return make_neg(unary());
    if (accept('+')) return unary();
    return power();
  }

  Expr power() {
    Expr base = primary();
    skip();
    if (accept('^')) {
      std::size_t at = pos_;
      Expr ex = unary();
      if (!ex.is_constant()) throw ParseError("exponent must be a rational constant", at);
      return make_pow(base, ex.value());
    }
    return base;
  }

  Expr number() {
    std::size_t start = pos_;
    BigInt digits = 0;
    BigInt scale = 1;
    bool seen_digit = false, seen_dot = false;
    while (pos_ < s_.size()) {
      char c = s_[pos_];
      if (std::isdigit(static_cast<unsigned char>(c))) {
        digits = digits * 10 + (c - '0');
        if (seen_dot) scale *= 10;
        seen_digit = true;
        ++pos_;
      } else if (c == '.' && !seen_dot) {
        seen_dot = true;
        ++pos_;
      } else {
        break;
      }
    }
    if (!seen_digit) throw ParseError("malformed number", start);
    Rational value(digits, scale);
    if (pos_ < s_.size() && (s_[pos_] == 'e' || s_[pos_] == 'E')) {
      std::size_t save = pos_;
      ++pos_;
      bool neg = false;
      if (pos_ < s_.size() && (s_[pos_] == '+' || s_[pos_] == '-')) neg = s_[pos_++] == '-';
      int ex = 0;
      bool any = false;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        ex = ex * 10 + (s_[pos_++] - '0');
        any = true;
        if (ex > 400) throw ParseError("exponent too large", save);
      }
      if (!any) throw ParseError("malformed exponent in number", save);
      value *= pow_int(Rational(10), neg ? -ex : ex);
    }
    return constant(value);
  }

  Expr primary() {
    skip();
    if (pos_ >= s_.size()) throw ParseError("unexpected end of input", pos_);
    char c = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.') return number();
    if (c == '(') {
      ++pos_;
      Expr e = expr();
      expect(')');
      return e;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t start = pos_;
      while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) ++pos_;
      while (pos_ < s_.size() && s_[pos_] == '\'') ++pos_;
      std::string name = s_.substr(start, pos_ - start);
      skip();
      if (pos_ < s_.size() && s_[pos_] == '(' && name.find('\'') == std::string::npos) {
        return call(name, start);
      }
      auto resolved = ctx_.resolve(name);
      if (!resolved) {
        if (is_function(name)) throw ParseError("function '" + name + "' requires an argument", start);
        throw ParseError("undeclared symbol '" + name + "'", start);
      }
      return symbol(*resolved);
    }
    throw ParseError(std::string("unexpected character '") + c + "'", pos_);
  }

  static bool is_function(const std::string& n) {
    return n == "exp" || n == "log" || n == "sin" || n == "cos" || n == "sqrt";
  }

  Expr call(const std::string& name, std::size_t at) {
    if (!is_function(name)) throw ParseError("unknown function '" + name + "'", at);
    expect('(');
    std::vector<Expr> args{expr()};
    while (accept(',')) args.push_back(expr());
    expect(')');
    if (args.size() != 1) {
      throw ParseError("function '" + name + "' takes 1 argument, got " + std::to_string(args.size()), at);
    }
    const Expr& a = args.front();
    if (name == "exp") return make_exp(a);
    if (name == "log") return make_log(a);
    if (name == "sin") return make_sin(a);
    if (name == "cos") return make_cos(a);
    return make_sqrt(a);
  }

  const std::string& s_;
  const VarContext& ctx_;
  std::size_t pos_{0};
};

// ---------------------------------------------------------------------------

enum Prec { kAdd = 1, kMul = 2, kUnary = 3, kPow = 4, kAtom = 5 };

// non-integers are always parenthesized so that a/b never binds wrongly
std::string print_rational(const Rational& r, bool /*in_product*/) {
  if (is_integer(r)) return numerator(r).str();
  return "(" + to_string(r) + ")";
}

std::string print_at(const Expr& e, int ctx);

std::string print_mul_body(const std::vector<Expr>& f) {
  std::string out;
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (i) out += "*";
    if (f[i].is_constant()) {
      out += print_rational(f[i].value(), true);
    } else {
      out += print_at(f[i], kMul + 1);
    }
  }
  return out;
}

// precedence that e itself has when printed
int own_prec(const Expr& e) {
  switch (e.kind()) {
    case Kind::Add: return kAdd;
    case Kind::Mul:
    case Kind::Div: return kMul;
    case Kind::Neg: return kUnary;
    case Kind::Pow: return kPow;
    case Kind::Constant:
      return e.value() < 0 ? kUnary : kAtom;
    case Kind::Float:
      return e.node().fvalue < 0 ? kUnary : kAtom;
    default: return kAtom;
  }
}

std::string print_raw(const Expr& e) {
  switch (e.kind()) {
    case Kind::Constant:
      return print_rational(e.value(), false);
    case Kind::Float: {
      std::ostringstream os;
      os.precision(17);
      os << e.node().fvalue;
      return os.str();
    }
    case Kind::Symbol:
      return e.name();
    case Kind::Add: {
      std::string out = print_at(e.arg(0), kAdd);
      for (std::size_t i = 1; i < e.args().size(); ++i) {
        const Expr& t = e.arg(i);
        if (t.kind() == Kind::Neg) {
          out += " - " + print_at(t.arg(), kMul);
        } else if (t.is_constant() && t.value() < 0) {
          out += " - " + print_rational(-t.value(), false);
        } else if (t.kind() == Kind::Mul && t.arg(0).is_constant() && t.arg(0).value() < 0) {
          std::vector<Expr> f = t.args();
          f[0] = constant(-f[0].value());
          out += " - " + print_mul_body(f);
        } else if (t.kind() == Kind::Div && t.arg(0).kind() == Kind::Mul && t.arg(0).arg(0).is_constant() &&
                   t.arg(0).arg(0).value() < 0) {
          // keep "+ -c*a/b" explicit: "- c*a/b" would reparse as Neg(Div(...))
          out += " + " + print_at(t, kAdd + 1);
        } else {
          out += " + " + print_at(t, kAdd + 1);
        }
      }
      return out;
    }
    case Kind::Mul:
      return print_mul_body(e.args());
    case Kind::Div:
      return print_at(e.arg(0), kMul) + "/" + print_at(e.arg(1), kMul + 1);
    case Kind::Neg: {
      const Expr& a = e.arg();
      bool bare = a.is_symbol() || a.kind() == Kind::Pow || a.kind() == Kind::Exp || a.kind() == Kind::Log ||
                  a.kind() == Kind::Sin || a.kind() == Kind::Cos || a.kind() == Kind::Sqrt;
      return bare ? "-" + print_raw(a) : "-(" + print_raw(a) + ")";
    }
    case Kind::Pow: {
      const Expr& b = e.arg();
      bool bare_base = b.is_symbol() || (b.is_constant() && b.value() >= 0 && is_integer(b.value())) ||
                       b.kind() == Kind::Exp || b.kind() == Kind::Log || b.kind() == Kind::Sin ||
                       b.kind() == Kind::Cos || b.kind() == Kind::Sqrt;
      std::string base = bare_base ? print_raw(b) : "(" + print_raw(b) + ")";
      const Rational& r = e.exponent();
      std::string ex = is_integer(r) ? numerator(r).str() : "(" + to_string(r) + ")";
      return base + "^" + ex;
    }
    case Kind::Exp: return "exp(" + print_raw(e.arg()) + ")";
    case Kind::Log: return "log(" + print_raw(e.arg()) + ")";
    case Kind::Sin: return "sin(" + print_raw(e.arg()) + ")";
    case Kind::Cos: return "cos(" + print_raw(e.arg()) + ")";
    case Kind::Sqrt: return "sqrt(" + print_raw(e.arg()) + ")";
  }
  return "?";
}

std::string print_at(const Expr& e, int ctx) {
  std::string s = print_raw(e);
  if (own_prec(e) < ctx) return "(" + s + ")";
  return s;
}

}  // namespace

Expr parse(const std::string& text, const VarContext& ctx) { return Parser(text, ctx).run(); }

std::string print(const Expr& e) { return print_raw(e); }

}  // namespace csa
