#pragma once

// Small numeric toolbox: fixed-step RK4, tabulated functions with cubic
// Hermite interpolation, and SVD rank / null space.

#include <Eigen/Dense>

#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace csa {

using State = std::vector<double>;
using Rhs = std::function<State(double, const State&)>;

struct Blowup : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// States at x0, x0+h, ..., x_end (the last step is shortened to land on x_end).
/// x_end may be below x0 (integrates backwards). Throws Blowup when the state
/// max-norm exceeds blowup_limit.
struct RkResult {
  std::vector<double> xs;
  std::vector<State> states;
};
RkResult rk4(const Rhs& f, double x0, const State& s0, double x_end, double h, double blowup_limit = 1e8);

/// Values with first derivatives on a strictly increasing grid.
class Tabulated {
 public:
  Tabulated() = default;
  /// Derivatives are taken from a natural cubic spline when dys is empty.
  Tabulated(std::vector<double> xs, std::vector<double> ys, std::vector<double> dys = {});

  double operator()(double x) const;
  double derivative(double x) const;
  double lo() const { return xs_.front(); }
  double hi() const { return xs_.back(); }
  bool contains(double x, double slack = 1e-12) const { return x >= lo() - slack && x <= hi() + slack; }

  const std::vector<double>& xs() const { return xs_; }
  const std::vector<double>& ys() const { return ys_; }
  const std::vector<double>& dys() const { return dys_; }

  /// Provenance: generating ODE, step size and an error estimate.
  std::string source;
  double step{0.0};
  double error_estimate{0.0};

  /// Two-column text table with a '#' header line carrying source and step.
  std::string serialize() const;
  static Tabulated deserialize(const std::string& text);

 private:
  std::size_t segment(double x) const;
  std::vector<double> xs_, ys_, dys_;
};

struct RankReport {
  int rank{0};
  std::vector<double> singular_values;
  double cutoff{0.0};
};

/// Singular values above rel_tol * sigma_max count toward the rank.
RankReport numerical_rank(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

/// Orthonormal basis of the numerical null space (columns).
Eigen::MatrixXd null_space(const Eigen::MatrixXd& m, double rel_tol = 1e-8);

}  // namespace csa
