#include "csa/canon.hpp"

#include <sstream>

namespace csa {

namespace {

using Mat2 = std::array<std::array<Rational, 2>, 2>;
using Vec4 = std::array<Rational, 4>;  // (a, b, c, d) row-major

const char* kUnknown[4] = {"a", "b", "c", "d"};

Mat2 zero2() { return {{{Rational(0), Rational(0)}, {Rational(0), Rational(0)}}}; }

Mat2 entry(int i, int j, const Rational& v = 1) {
  Mat2 m = zero2();
  m[i][j] = v;
  return m;
}

Rational det(const Vec4& p) { return p[0] * p[3] - p[1] * p[2]; }

std::string show(const Mat2& m) {
  return "[[" + to_string(m[0][0]) + ", " + to_string(m[0][1]) + "], [" + to_string(m[1][0]) + ", " +
         to_string(m[1][1]) + "]]";
}

std::string show_row(const Vec4& row) {
  std::string s;
  for (int k = 0; k < 4; ++k) {
    if (row[k] == 0) continue;
    Rational c = row[k];
    if (!s.empty()) s += c < 0 ? " - " : " + ";
    else if (c < 0) s += "-";
    Rational a = abs(c);
    if (a != 1) s += to_string(a) + "*";
    s += kUnknown[k];
  }
  return s + " = 0";
}

// rows of P*E = 0 (entries (P E)_ij = sum_k P_ik E_kj)
void right_product_rows(const Mat2& E, std::vector<Vec4>& rows) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Vec4 r{};
      for (int k = 0; k < 2; ++k) r[2 * i + k] += E[k][j];
      rows.push_back(r);
    }
  }
}

// rows of T*P = 0
void left_product_rows(const Mat2& T, std::vector<Vec4>& rows) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      Vec4 r{};
      for (int k = 0; k < 2; ++k) r[2 * k + j] += T[i][k];
      rows.push_back(r);
    }
  }
}

// exact null space by Gauss-Jordan elimination
std::vector<Vec4> null_space(std::vector<Vec4> rows) {
  std::vector<int> pivot_col;
  std::size_t rank = 0;
  for (int col = 0; col < 4 && rank < rows.size(); ++col) {
    std::size_t p = rank;
    while (p < rows.size() && rows[p][col] == 0) ++p;
    if (p == rows.size()) continue;
    std::swap(rows[p], rows[rank]);
    Rational inv = 1 / rows[rank][col];
    for (auto& v : rows[rank]) v *= inv;
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      Rational f = rows[r][col];
      for (int k = 0; k < 4; ++k) rows[r][k] -= f * rows[rank][k];
    }
    pivot_col.push_back(col);
    ++rank;
  }
  std::vector<Vec4> basis;
  for (int free = 0; free < 4; ++free) {
    if (std::find(pivot_col.begin(), pivot_col.end(), free) != pivot_col.end()) continue;
    Vec4 v{};
    v[free] = 1;
    for (std::size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -rows[r][free];
    basis.push_back(v);
  }
  return basis;
}

Vec4 combine(const Vec4& u, const Vec4& v, const Rational& s) {
  Vec4 w;
  for (int k = 0; k < 4; ++k) w[k] = u[k] + s * v[k];
  return w;
}

// a nondegenerate element of span(basis), if the determinant is not identically zero there
std::optional<Vec4> nondegenerate_element(const std::vector<Vec4>& basis) {
  for (const auto& v : basis) {
    if (det(v) != 0) return v;
  }
  // det(u + s v) = det u + s (mixed) + s^2 det v; with det u = det v = 0 only the mixed term remains
  for (std::size_t i = 0; i < basis.size(); ++i) {
    for (std::size_t j = i + 1; j < basis.size(); ++j) {
      Vec4 w = combine(basis[i], basis[j], 1);
      if (det(w) != 0) return w;
    }
  }
  return std::nullopt;
}

struct Slot {
  std::string name;
  Rational value;
  Mat2 direction;
};

// P S = T P for S = sum of independent functions along the slot directions
EquivalenceVerdict solve(const std::vector<Slot>& source, const Mat2& target, const std::string& source_name,
                         const std::string& target_name) {
  EquivalenceVerdict v;
  auto& chain = v.chain;
  chain.push_back("unknown constant map (y~, z~) = P (y, z) with P = [[a, b], [c, d]] and a*d - b*c != 0");
  chain.push_back("substituting gives P " + source_name + " = " + target_name + " P");
  std::vector<Vec4> rows;
  bool any_function = false;
  for (const auto& s : source) {
    if (s.value == 0) continue;
    any_function = true;
    std::vector<Vec4> r;
    right_product_rows(s.direction, r);
    std::string eqs;
    for (const auto& row : r) {
      if (std::all_of(row.begin(), row.end(), [](const Rational& q) { return q == 0; })) continue;
      if (!eqs.empty()) eqs += ", ";
      eqs += show_row(row);
    }
    chain.push_back(s.name + " is treated as an independent function of x; its coefficient P*" + show(s.direction) +
                    " must vanish: " + eqs);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  if (!any_function) chain.push_back(source_name + " vanishes identically");
  std::vector<Vec4> r;
  left_product_rows(target, r);
  chain.push_back("the remaining constant part requires " + target_name + " P = 0 with " + target_name + " = " +
                  show(target));
  rows.insert(rows.end(), r.begin(), r.end());

  auto basis = null_space(rows);
  chain.push_back("solution space of the linear conditions has dimension " + std::to_string(basis.size()));
  if (auto p = nondegenerate_element(basis)) {
    v.consistent = true;
    v.solution = *p;
    chain.push_back("nondegenerate solution (a, b, c, d) = (" + to_string((*p)[0]) + ", " + to_string((*p)[1]) +
                    ", " + to_string((*p)[2]) + ", " + to_string((*p)[3]) + ")");
  } else {
    chain.push_back(basis.empty() ? "only a = b = c = d = 0 solves the conditions"
                                  : "a*d - b*c vanishes identically on the solution space");
    chain.push_back("contradiction with a*d - b*c != 0: Inconsistent");
  }
  return v;
}

std::vector<Slot> optimal_slots(const std::array<Rational, 3>& o) {
  Mat2 diag = zero2();
  diag[0][0] = 1;
  diag[1][1] = -1;
  return {{"d11", o[0], diag}, {"d12", o[1], entry(0, 1)}, {"d21", o[2], entry(1, 0)}};
}

std::vector<Slot> zero_order_slots(const std::array<Rational, 2>& z) {
  Mat2 id = zero2(), rot = zero2();
  id[0][0] = id[1][1] = 1;
  rot[0][1] = -1;
  rot[1][0] = 1;
  return {{"a3", z[0], id}, {"a4", z[1], rot}};
}

Mat2 value_of(const std::vector<Slot>& slots) {
  Mat2 m = zero2();
  for (const auto& s : slots) {
    for (int i = 0; i < 2; ++i) {
      for (int j = 0; j < 2; ++j) m[i][j] += s.value * s.direction[i][j];
    }
  }
  return m;
}

// real similarity of the concrete constant matrices [[a0, b0], [c0, -a0]] and a3 I + a4 J
void value_level(const std::array<Rational, 3>& o, const std::array<Rational, 2>& z, EquivalenceVerdict& v) {
  const Rational q = o[0] * o[0] + o[1] * o[2];
  const bool optimal_zero = o[0] == 0 && o[1] == 0 && o[2] == 0;
  v.outside_reduced_reach = !optimal_zero && q == 0;
  if (z[0] != 0) {
    v.value_level_similar = false;
  } else if (z[1] == 0) {
    v.value_level_similar = optimal_zero;
  } else {
    v.value_level_similar = z[1] * z[1] == -q;
  }
  v.chain.push_back(std::string("value level: the constant matrices are ") +
                    (v.value_level_similar ? "" : "not ") + "similar (a0^2 + b0*c0 = " + to_string(q) + ")");
  if (v.outside_reduced_reach) {
    v.chain.push_back("a0^2 + b0*c0 = 0 with a nonzero matrix: nilpotent form, not reachable from the reduced form");
  }
}

}  // namespace

EquivalenceVerdict attempt_linear_equivalence(const std::array<Rational, 3>& optimal,
                                              const std::array<Rational, 2>& zero_order) {
  auto src = zero_order_slots(zero_order);
  EquivalenceVerdict v = solve(optimal_slots(optimal), value_of(src), "D", "A");
  value_level(optimal, zero_order, v);
  return v;
}

EquivalenceVerdict attempt_linear_equivalence_reverse(const std::array<Rational, 2>& zero_order,
                                                      const std::array<Rational, 3>& optimal) {
  EquivalenceVerdict v = solve(zero_order_slots(zero_order), value_of(optimal_slots(optimal)), "A", "D");
  value_level(optimal, zero_order, v);
  return v;
}

EquivalenceVerdict attempt_linear_equivalence_variable(const std::array<Rational, 3>& optimal,
                                                       const std::array<Rational, 2>& zero_order) {
  EquivalenceVerdict v = attempt_linear_equivalence(optimal, zero_order);
  std::vector<std::string> pre{
      "x-dependent map (y~, z~) = P(x) (y, z) gives y~'' = P u'' + 2 P' u' + P'' u",
      "the target has no first-derivative terms and y', z' are free, so P' = 0: a' = b' = c' = d' = 0",
      "P is constant, which is the constant-map case"};
  v.chain.insert(v.chain.begin(), pre.begin(), pre.end());
  return v;
}

}  // namespace csa
