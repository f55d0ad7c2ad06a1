#include "run_loop.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fastdiff::detail {

namespace {

struct NormSet {
  double l1, l2, linf;
};

NormSet norms_of(const Field& f) {
  return {lr_norm(f, 1.0), lr_norm(f, 2.0), lr_norm(f, std::numeric_limits<double>::infinity())};
}

double sink_integral(const Field& f, double p) {
  const auto& w = f.grid().volumes();
  const auto& v = f.values();
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += std::pow(v[i], p) * w[i];
  return acc;
}

}  // namespace

Trajectory run_adaptive(const Field& u0, double t_end, const StepControl& ctrl,
                        Trajectory::Kind kind, std::vector<double> snapshot_times,
                        const RunHooks& hooks) {
  ctrl.validate();
  if (!(t_end > 0.0)) throw std::invalid_argument("run: t_end must be positive");
  std::sort(snapshot_times.begin(), snapshot_times.end());
  snapshot_times.erase(std::unique(snapshot_times.begin(), snapshot_times.end()),
                       snapshot_times.end());
  for (double ts : snapshot_times) {
    if (ts < 0.0 || ts > t_end * (1.0 + 1e-12)) {
      throw std::invalid_argument("run: snapshot time outside [0, t_end]");
    }
  }

  Trajectory traj;
  traj.kind = kind;

  const size_t n_integrands = hooks.step_integrands.size();
  std::vector<double> interval_acc(n_integrands, 0.0);

  Field u = u0;
  double t = 0.0;
  size_t snap_i = 0;
  if (snap_i < snapshot_times.size() && snapshot_times[snap_i] == 0.0) {
    traj.snapshots.push_back({0.0, u, hooks.diagnose(u, 0.0)});
    ++snap_i;
  }
  double dt = std::clamp(ctrl.dt_init, ctrl.dt_min, ctrl.dt_max);
  int easy = 0;
  const double t_tiny = 1e-14 * t_end;

  while (t < t_end - t_tiny) {
    const double target = snap_i < snapshot_times.size() ? snapshot_times[snap_i] : t_end;
    const bool clipped = t + dt >= target - t_tiny;
    const double dt_try = clipped ? target - t : dt;
    const double t_new = clipped ? target : t + dt_try;

    const ImplicitCoeffs coeffs = hooks.coeffs(t_new);
    StepAttempt att = implicit_step(u.grid_ptr(), u.values(), dt_try, coeffs, ctrl);
    if (!att.next) {
      ++traj.audit.rejected;
      easy = 0;
      dt = dt_try * ctrl.shrink_factor;
      if (dt < ctrl.dt_min) {
        throw SolverError("run: Newton failed and dt underflowed at t=" + std::to_string(t), t);
      }
      continue;
    }

    const Field& next = *att.next;
    // audit: per-step norm monotonicity and the backward-Euler mass identity
    const NormSet before = norms_of(u);
    const NormSet after = norms_of(next);
    auto& audit = traj.audit;
    audit.max_l1_increase = std::max(audit.max_l1_increase, after.l1 - before.l1);
    audit.max_l2_increase = std::max(audit.max_l2_increase, after.l2 - before.l2);
    audit.max_linf_increase = std::max(audit.max_linf_increase, after.linf - before.linf);
    const double sink = coeffs.sink != 0.0 ? coeffs.sink * sink_integral(next, coeffs.p) : 0.0;
    audit.max_mass_ode_residual = std::max(
        audit.max_mass_ode_residual, std::abs((mass(next) - mass(u)) / dt_try + sink));
    audit.max_newton_residual = std::max(audit.max_newton_residual, att.residual_l1);
    audit.min_dt = std::min(audit.min_dt, dt_try);
    audit.max_dt = std::max(audit.max_dt, dt_try);
    audit.newton_iterations += att.iterations;
    ++audit.steps;

    // right-endpoint rule: exactly the quadrature backward Euler induces
    for (size_t j = 0; j < n_integrands; ++j) {
      interval_acc[j] += dt_try * hooks.step_integrands[j](next, t_new);
    }

    u = next;
    t = t_new;

    if (snap_i < snapshot_times.size() && t >= snapshot_times[snap_i] - t_tiny) {
      traj.snapshots.push_back({t, u, hooks.diagnose(u, t)});
      ++snap_i;
      if (traj.snapshots.size() >= 2 && n_integrands > 0) {
        traj.moment_rhs_integral.push_back(interval_acc[0]);
        if (n_integrands > 1) traj.dissipation_integral.push_back(interval_acc[1]);
      }
      std::fill(interval_acc.begin(), interval_acc.end(), 0.0);
    }

    if (!clipped) {
      if (++easy >= ctrl.easy_steps_before_growth) {
        dt = std::min(dt * ctrl.grow_factor, ctrl.dt_max);
        easy = 0;
      }
    }
  }
  return traj;
}

}  // namespace fastdiff::detail
