#pragma once

#include <limits>
#include <optional>
#include <stdexcept>
#include <vector>

#include "fastdiff/grid.hpp"

namespace fastdiff {

/// Adaptive backward-Euler step control shared by both solvers.
struct StepControl {
  double dt_init = 1e-3;
  double dt_min = 1e-12;
  double dt_max = 0.1;
  double newton_tol = 1e-11;  ///< absolute L1 norm of the cell-mass residuals
  int newton_max_iter = 30;
  double grow_factor = 1.2;
  double shrink_factor = 0.5;
  int easy_steps_before_growth = 3;

  void validate() const;
};

/// Thrown when the time stepper cannot continue (dt underflow). Any Newton
/// failure before that is a numerical event handled by dt halving, not an
/// error.
struct SolverError : std::runtime_error {
  double time;
  SolverError(const std::string& what, double t) : std::runtime_error(what), time(t) {}
};

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

/// Per-snapshot scalar diagnostics. The rescaled solver fills the profile
/// and entropy block; the physical solver leaves it NaN.
struct Diagnostics {
  double time = 0.0;  ///< t (physical) or s (rescaled)
  double mass = kNaN;
  double l1 = kNaN;
  double l2 = kNaN;
  double linf = kNaN;
  double second_moment = kNaN;
  double tail_fraction = kNaN;  ///< mass fraction beyond 0.9 r_max (truncation monitor)

  // rescaled-frame block
  double M = kNaN;                  ///< mass in the rescaled frame (alias of mass)
  double theta = kNaN;              ///< grid-mass-matched profile parameter
  double l1_dist_to_profile = kNaN; ///< ||rho - rho_{M(s)}||_1
  double entropy = kNaN;            ///< E(rho)
  double entropy_rel = kNaN;        ///< E(rho | rho_{M(s)})
  double bregman_div = kNaN;        ///< D(rho | rho_{M(s)})
  double dissipation = kNaN;        ///< entropy production integral
  double lm_integral = kNaN;        ///< int rho^m
  double absorption_lp = kNaN;      ///< int rho^p
  double absorption_moment = kNaN;  ///< int rho^p |y|^2
  double absorption_entropy_lm = kNaN;  ///< int rho^p * m/(m-1) rho^{m-1}
  double absorption_entropy_moment = kNaN;  ///< int rho^p * |y|^2 / 2
};

struct Snapshot {
  double time;
  Field field;
  Diagnostics diag;
};

/// Per-run audit counters accumulated at every accepted step.
struct StepAudit {
  long long steps = 0;
  long long rejected = 0;
  long long newton_iterations = 0;
  double min_dt = std::numeric_limits<double>::infinity();
  double max_dt = 0.0;
  double max_newton_residual = 0.0;   ///< worst converged L1 residual
  double max_mass_ode_residual = 0.0; ///< worst |dM/dt + sink| per step
  double max_l1_increase = 0.0;       ///< worst per-step increase of ||.||_1
  double max_l2_increase = 0.0;
  double max_linf_increase = 0.0;
};

struct Trajectory {
  enum class Kind { physical, rescaled };
  Kind kind = Kind::physical;
  std::vector<Snapshot> snapshots;
  StepAudit audit;

  /// Rescaled runs: integral of the second-moment ODE right-hand side
  /// 2n int rho^m - 2 int rho|y|^2 - e^{-delta s} int rho^p |y|^2
  /// accumulated step-by-step (trapezoid) over each snapshot interval;
  /// size = snapshots.size() - 1.
  std::vector<double> moment_rhs_integral;

  /// Same step-level accumulation of the entropy production integral
  /// (rescaled runs), for the dissipation-vs-entropy-decay comparison.
  std::vector<double> dissipation_integral;
};

/// Result of a single implicit step attempt. `next` is empty when Newton
/// failed to converge; the caller is expected to halve dt and retry.
struct StepAttempt {
  std::optional<Field> next;
  int iterations = 0;
  double residual_l1 = 0.0;
};

}  // namespace fastdiff
