#pragma once

#include <functional>
#include <vector>

#include "fastdiff/grid.hpp"
#include "fastdiff/params.hpp"
#include "fastdiff/stepping.hpp"

namespace fastdiff {

/// One backward-Euler step of the rescaled flow
///   rho_s = div( rho y + grad(rho^m) + eps e^{(lambda-2)s} grad rho ) - e^{-delta s} rho^p
/// with zero-flux boundaries; absorption and the decaying regularization are
/// evaluated at the new time level.
StepAttempt step_rescaled(const Field& rho, double s, double ds, const ModelParams& params,
                          const StepControl& ctrl);

/// Adaptive march to s_end with per-snapshot profile diagnostics: grid-mass
/// matched theta, L1 distance to the matched profile, entropy, relative
/// entropy, Bregman divergence, dissipation, and the absorption integrals.
/// The second-moment ODE right-hand side and the dissipation integrand are
/// accumulated per snapshot interval along the steps.
Trajectory run_rescaled(const Field& rho0, double s_end, const ModelParams& params,
                        const StepControl& ctrl, const std::vector<double>& snapshot_s);

struct CrossCheckRow {
  double t;
  double s;
  double l1_discrepancy;
};

struct CrossCheckReport {
  double max_discrepancy = 0.0;
  std::vector<CrossCheckRow> rows;
};

/// Runs the physical solver from the given radial initial profile, maps its
/// snapshots through the similarity change of variables, runs the rescaled
/// solver from the same data, and reports the L1 discrepancy at matched
/// times s(t). The physical grid should extend to at least
/// r_max(rescaled) * R(t_end) so the transformed fields cover the rescaled
/// domain at every checkpoint.
CrossCheckReport cross_check_physical_rescaled(const std::function<double(double)>& initial,
                                               const ModelParams& params, const StepControl& ctrl,
                                               const GridPtr& grid_physical,
                                               const GridPtr& grid_rescaled, double t_end,
                                               int checkpoints);

}  // namespace fastdiff
