#pragma once

// Internal adaptive-dt march shared by the two solvers. Not installed.

#include <functional>
#include <vector>

#include "fastdiff/stepping.hpp"
#include "implicit_radial.hpp"

namespace fastdiff::detail {

struct RunHooks {
  /// Step coefficients, evaluated at the new time level.
  std::function<ImplicitCoeffs(double t_new)> coeffs;

  /// Snapshot diagnostics.
  std::function<Diagnostics(const Field&, double t)> diagnose;

  /// Integrands accumulated along steps (trapezoid in time) and flushed into
  /// per-snapshot-interval totals: index 0 -> Trajectory::moment_rhs_integral,
  /// index 1 -> Trajectory::dissipation_integral.
  std::vector<std::function<double(const Field&, double t)>> step_integrands;
};

Trajectory run_adaptive(const Field& u0, double t_end, const StepControl& ctrl,
                        Trajectory::Kind kind, std::vector<double> snapshot_times,
                        const RunHooks& hooks);

}  // namespace fastdiff::detail
