#pragma once

#include <vector>

#include "fastdiff/grid.hpp"
#include "fastdiff/params.hpp"
#include "fastdiff/stepping.hpp"

namespace fastdiff {

/// One backward-Euler step of u_t = div grad(u^m + eps u) - u^p on the radial
/// grid with zero-flux boundaries. Damped Newton on the new state; the result
/// (when converged) is nonnegative.
StepAttempt step_physical(const Field& u, double t, double dt, const ModelParams& params,
                          const StepControl& ctrl);

/// Adaptive march to t_end. Snapshots are hit exactly by dt clipping; all
/// snapshot times must lie in [0, t_end]. Newton failures halve dt; dt
/// underflow throws SolverError with the failing time.
Trajectory run_physical(const Field& u0, double t_end, const ModelParams& params,
                        const StepControl& ctrl, const std::vector<double>& snapshot_times);

/// Radial smoothing by a normalized compactly supported bump of the given
/// radius. Column-stochastic in the volume measure, so the grid mass is
/// preserved exactly; radius 0 is the identity.
Field mollify_initial(const Field& u0, double radius);

}  // namespace fastdiff
