#include "fastdiff/solver_physical.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "run_loop.hpp"

namespace fastdiff {

namespace {

detail::ImplicitCoeffs physical_coeffs(const ModelParams& params) {
  detail::ImplicitCoeffs c;
  c.m = params.m;
  c.p = params.p;
  c.eps = params.epsilon;
  c.sink = params.absorption_enabled ? 1.0 : 0.0;
  c.drift = false;
  return c;
}

Diagnostics physical_diagnostics(const Field& u, double t) {
  Diagnostics d;
  d.time = t;
  d.mass = mass(u);
  d.l1 = d.mass;
  d.l2 = lr_norm(u, 2.0);
  d.linf = lr_norm(u, std::numeric_limits<double>::infinity());
  d.second_moment = second_moment(u);
  d.tail_fraction = tail_mass_fraction(u, 0.9 * u.grid().r_max());
  return d;
}

}  // namespace

StepAttempt step_physical(const Field& u, double /*t*/, double dt, const ModelParams& params,
                          const StepControl& ctrl) {
  params.validate();
  if (!(dt > 0.0)) throw std::invalid_argument("step_physical: dt must be positive");
  return detail::implicit_step(u.grid_ptr(), u.values(), dt, physical_coeffs(params), ctrl);
}

Trajectory run_physical(const Field& u0, double t_end, const ModelParams& params,
                        const StepControl& ctrl, const std::vector<double>& snapshot_times) {
  params.validate();
  detail::RunHooks hooks;
  hooks.coeffs = [&](double) { return physical_coeffs(params); };
  hooks.diagnose = [](const Field& f, double t) { return physical_diagnostics(f, t); };
  return detail::run_adaptive(u0, t_end, ctrl, Trajectory::Kind::physical, snapshot_times, hooks);
}

Field mollify_initial(const Field& u0, double radius) {
  if (!(radius >= 0.0)) throw std::invalid_argument("mollify_initial: radius must be >= 0");
  if (radius == 0.0) return u0;
  const RadialGrid& grid = u0.grid();
  const auto& centers = grid.centers();
  const auto& vols = grid.volumes();
  const int K = u0.size();

  const auto bump = [radius](double d) {
    const double x = d / radius;
    if (std::abs(x) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - x * x));
  };

  // column j spreads the mass u_j V_j with weights kappa(|r_i - r_j|) V_i,
  // normalized per column so the total mass is preserved exactly
  std::vector<double> out(K, 0.0);
  for (int j = 0; j < K; ++j) {
    if (u0[j] == 0.0) continue;
    double norm = 0.0;
    int lo = j, hi = j;
    while (lo > 0 && centers[j] - centers[lo - 1] < radius) --lo;
    while (hi + 1 < K && centers[hi + 1] - centers[j] < radius) ++hi;
    for (int i = lo; i <= hi; ++i) norm += bump(centers[i] - centers[j]) * vols[i];
    const double dm = u0[j] * vols[j] / norm;
    for (int i = lo; i <= hi; ++i) out[i] += dm * bump(centers[i] - centers[j]);
  }
  return Field(u0.grid_ptr(), std::move(out));
}

}  // namespace fastdiff
