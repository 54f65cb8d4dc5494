#pragma once

// Fixtures shared by the unit tests and the acceptance run.

#include "csa/expr.hpp"

#include <random>
#include <string>
#include <vector>

namespace csa::fixtures {

// Random expressions in x, y over functions that stay defined for real
// arguments of moderate size.
class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  Expr leaf() {
    switch (pick(4)) {
      case 0: return symbol("x");
      case 1: return symbol("y");
      case 2: return constant(static_cast<std::int64_t>(pick(7)) - 3);
      default: return constant(Rational(static_cast<std::int64_t>(pick(5)) + 1, 2));
    }
  }

  Expr any(int depth) {
    if (depth == 0) return leaf();
    switch (pick(9)) {
      case 0: return make_add({any(depth - 1), any(depth - 1)});
      case 1: return make_mul({any(depth - 1), any(depth - 1)});
      case 2: return make_add({any(depth - 1), make_neg(any(depth - 1))});
      case 3: return make_div(any(depth - 1), make_add({constant(3), make_pow(any(depth - 1), 2)}));
      case 4: return make_pow(any(depth - 1), static_cast<std::int64_t>(pick(3)) + 1);
      case 5: return make_sin(any(depth - 1));
      case 6: return make_cos(any(depth - 1));
      case 7: return make_exp(make_div(any(depth - 1), constant(4)));
      default: return make_sqrt(make_add({constant(2), make_pow(any(depth - 1), 2)}));
    }
  }

 private:
  unsigned pick(unsigned n) { return static_cast<unsigned>(rng_() % n); }
  std::mt19937_64 rng_;
};

// the seven printed constant-beta generators for beta = 1, one per constant
inline const std::vector<std::string> kPrinted{
    "xi=1",
    "eta1=y; eta2=-z",
    "eta1=-exp(-x/sqrt(2))*sin(x/sqrt(2)); eta2=exp(-x/sqrt(2))*cos(x/sqrt(2))",
    "eta1=-exp(x/sqrt(2))*sin(x/sqrt(2)); eta2=-exp(x/sqrt(2))*cos(x/sqrt(2))",
    "eta1=exp(-x/sqrt(2))*cos(x/sqrt(2)); eta2=exp(-x/sqrt(2))*sin(x/sqrt(2))",
    "eta1=exp(x/sqrt(2))*cos(x/sqrt(2)); eta2=-exp(x/sqrt(2))*sin(x/sqrt(2))",
    "eta1=z; eta2=y",
};

}  // namespace csa::fixtures
