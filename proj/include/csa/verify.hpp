#pragma once

// Numeric trajectories of two-equation systems, residuals of transformed
// trajectories, and the worked example corpus.

#include "csa/canon.hpp"
#include "csa/csa.hpp"
#include "csa/symmetry.hpp"

#include <complex>

namespace csa {

struct DomainError : std::runtime_error {
  DomainError(const std::string& msg, double at) : std::runtime_error(msg), where(at) {}
  double where;
};
struct IntegrationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NonMonotone : std::runtime_error {
  NonMonotone(const std::string& msg, double at) : std::runtime_error(msg), where(at) {}
  double where;
};

struct Trajectory {
  std::vector<double> xs;
  std::vector<State> states;  // (y, z, y', z')
  OdeSystem2 generator;
  double step{0.0};
  double halfstep_error{0.0};  // max-norm difference to the h/2 run at common nodes
};

/// init = (x0, y0, z0, y0', z0'). Parameters of sys are bound from `params`.
/// Throws Blowup, DomainError, or IntegrationError when the h/2 rerun differs
/// by more than 1e-7.
Trajectory integrate(const OdeSystem2& sys, const std::array<double, 5>& init, double x_end, double h = 1e-3,
                     const Bindings& params = {});

/// max |Y'' - w1| + |Z'' - w2| of the mapped trajectory over interior nodes.
/// Second derivatives come from local quintics through (X, Y, Y') at three
/// nodes about 0.01 apart in the old variable; three nodes (or one stencil
/// half-width, if larger) are dropped at each end.
double residual_on_trajectory(const Trajectory& traj, const OdeSystem2& target, const PointTransformation& T,
                              const Bindings& params = {});

using ComplexRhs = std::function<std::complex<double>(double, std::complex<double>, std::complex<double>)>;

/// u'' = w(x, u, u') integrated as a complex ODE; states returned as (y, z, y', z').
RkResult integrate_complex(const ComplexRhs& w, const std::array<double, 5>& init, double x_end, double h = 1e-3);

struct ExampleCase {
  int id{0};
  std::string title;
  OdeSystem2 system;            // symbolic constants c1, c2
  PointTransformation transformation;
  VarContext target_ctx;
  OdeSystem2 expected_target;
  Bindings parameters;          // frozen values for the numeric checks
  std::array<double, 5> init{};
  double x_end{0.0};
  ComplexRhs complex_rhs;       // the same example written as a complex equation
  std::optional<int> expected_dimension;
  bool dimension_inferred{false};
};

/// Cases 1..4. Throws std::invalid_argument for other ids.
ExampleCase example_case(int id);

struct StageResult {
  std::string stage;
  bool passed{false};
  std::string detail;
};

struct CaseReport {
  int id{0};
  std::string title;
  std::vector<StageResult> stages;
  double trajectory_residual{0.0};
  double complex_route_deviation{0.0};
  std::optional<int> dimension;
  std::optional<int> expected_dimension;
  bool dimension_inferred{false};
  std::string reduction_chain;

  bool passed() const;
  const StageResult* first_failure() const;
};

CaseReport run_example(int id, std::uint64_t seed = default_sample_seed());

}  // namespace csa
