#include "fastdiff/solver_rescaled.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

#include "fastdiff/functionals.hpp"
#include "fastdiff/profiles.hpp"
#include "fastdiff/solver_physical.hpp"
#include "run_loop.hpp"

namespace fastdiff {

namespace {

detail::ImplicitCoeffs rescaled_coeffs(const ModelParams& params, const DerivedConstants& c,
                                       double s_new) {
  detail::ImplicitCoeffs co;
  co.m = params.m;
  co.p = params.p;
  co.eps = params.epsilon * std::exp((c.lambda - 2.0) * s_new);
  co.sink = params.absorption_enabled ? std::exp(-c.delta * s_new) : 0.0;
  co.drift = true;
  return co;
}

double grid_integral_pow(const Field& f, double e) {
  const auto& w = f.grid().volumes();
  const auto& v = f.values();
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += std::pow(v[i], e) * w[i];
  return acc;
}

double grid_integral_pow_moment(const Field& f, double e) {
  const auto& w = f.grid().volumes();
  const auto& c = f.grid().centers();
  const auto& v = f.values();
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += std::pow(v[i], e) * c[i] * c[i] * w[i];
  return acc;
}

}  // namespace

StepAttempt step_rescaled(const Field& rho, double s, double ds, const ModelParams& params,
                          const StepControl& ctrl) {
  params.validate();
  if (!(ds > 0.0)) throw std::invalid_argument("step_rescaled: ds must be positive");
  const DerivedConstants c = derive_constants(params);
  return detail::implicit_step(rho.grid_ptr(), rho.values(), ds,
                               rescaled_coeffs(params, c, s + ds), ctrl);
}

Trajectory run_rescaled(const Field& rho0, double s_end, const ModelParams& params,
                        const StepControl& ctrl, const std::vector<double>& snapshot_s) {
  params.validate();
  const DerivedConstants c = derive_constants(params);
  const RegimeReport regime = classify_regime(params);
  const bool profile_diag = regime.barenblatt_ok && regime.shannon_ok;

  // theta warm start shared across snapshot diagnostics
  auto theta_prev = std::make_shared<double>(0.0);

  detail::RunHooks hooks;
  hooks.coeffs = [params, c](double s_new) { return rescaled_coeffs(params, c, s_new); };
  hooks.diagnose = [params, c, profile_diag, theta_prev](const Field& rho, double s) {
    Diagnostics d;
    d.time = s;
    d.mass = mass(rho);
    d.l1 = d.mass;
    d.l2 = lr_norm(rho, 2.0);
    d.linf = lr_norm(rho, std::numeric_limits<double>::infinity());
    d.second_moment = second_moment(rho);
    d.tail_fraction = tail_mass_fraction(rho, 0.9 * rho.grid().r_max());
    d.M = d.mass;
    d.lm_integral = grid_integral_pow(rho, params.m);
    d.absorption_lp = grid_integral_pow(rho, params.p);
    d.absorption_moment = grid_integral_pow_moment(rho, params.p);
    // signed absorption-entropy pieces, recorded separately (the integrand
    // m/(m-1) rho^{m-1} + |y|^2/2 is not sign-definite)
    d.absorption_entropy_lm =
        params.m / (params.m - 1.0) * grid_integral_pow(rho, params.p + params.m - 1.0);
    d.absorption_entropy_moment = 0.5 * d.absorption_moment;
    if (profile_diag && d.mass > 0.0) {
      const BarenblattSpec spec =
          solve_theta_on_grid(d.mass, params, rho.grid_ptr(), *theta_prev);
      *theta_prev = spec.theta;
      d.theta = spec.theta;
      const Field prof = rho_profile(spec.theta, params, rho.grid_ptr());
      d.l1_dist_to_profile = l1_distance(rho, prof);
      d.entropy = entropy(rho, params);
      d.entropy_rel = d.entropy - entropy(prof, params);
      d.bregman_div = bregman(rho, spec, params);
      d.dissipation = dissipation(rho, params);
    }
    return d;
  };
  hooks.step_integrands = {
      // d/ds second moment = 2n int rho^m - 2 int rho|y|^2 - e^{-delta s} int rho^p |y|^2
      [params, c](const Field& rho, double s) {
        const double sink = params.absorption_enabled ? std::exp(-c.delta * s) : 0.0;
        return 2.0 * params.n * grid_integral_pow(rho, params.m) - 2.0 * second_moment(rho) -
               sink * grid_integral_pow_moment(rho, params.p);
      },
      [params](const Field& rho, double) { return dissipation(rho, params); },
  };
  return detail::run_adaptive(rho0, s_end, ctrl, Trajectory::Kind::rescaled, snapshot_s, hooks);
}

CrossCheckReport cross_check_physical_rescaled(const std::function<double(double)>& initial,
                                               const ModelParams& params, const StepControl& ctrl,
                                               const GridPtr& grid_physical,
                                               const GridPtr& grid_rescaled, double t_end,
                                               int checkpoints) {
  params.validate();
  if (checkpoints < 1) throw std::invalid_argument("cross_check: need at least one checkpoint");
  const DerivedConstants c = derive_constants(params);

  const auto sample = [&](const GridPtr& g) {
    std::vector<double> v(g->cells());
    for (int i = 0; i < g->cells(); ++i) v[i] = std::max(initial(g->centers()[i]), 0.0);
    return Field(g, std::move(v));
  };

  const double s_end = s_of_t(t_end, c.lambda);
  std::vector<double> s_checks(checkpoints);
  std::vector<double> t_checks(checkpoints);
  for (int j = 0; j < checkpoints; ++j) {
    s_checks[j] = s_end * (j + 1) / checkpoints;
    t_checks[j] = t_of_s(s_checks[j], c.lambda);
  }

  Trajectory phys = run_physical(sample(grid_physical), t_end, params, ctrl, t_checks);
  Trajectory resc = run_rescaled(sample(grid_rescaled), s_end, params, ctrl, s_checks);
  if (phys.snapshots.size() != resc.snapshots.size()) {
    throw std::runtime_error("cross_check: snapshot counts differ");
  }

  CrossCheckReport report;
  const auto& centers_y = grid_rescaled->centers();
  const auto& vols_y = grid_rescaled->volumes();
  for (size_t j = 0; j < phys.snapshots.size(); ++j) {
    const double t = phys.snapshots[j].time;
    const RescaledField mapped = rescale_u_to_rho(phys.snapshots[j].field, t, params);
    const auto& rc = mapped.rho.grid().centers();
    const auto& rv = mapped.rho.values();
    const auto& other = resc.snapshots[j].field.values();
    // linear interpolation of the transformed field onto the rescaled grid
    double l1 = 0.0;
    size_t seg = 0;
    for (size_t i = 0; i < centers_y.size(); ++i) {
      const double y = centers_y[i];
      double val;
      if (y <= rc.front()) {
        val = rv.front();
      } else if (y >= rc.back()) {
        val = rv.back();
      } else {
        while (seg + 1 < rc.size() && rc[seg + 1] < y) ++seg;
        const double frac = (y - rc[seg]) / (rc[seg + 1] - rc[seg]);
        val = rv[seg] + frac * (rv[seg + 1] - rv[seg]);
      }
      l1 += std::abs(val - other[i]) * vols_y[i];
    }
    report.rows.push_back({t, mapped.s, l1});
    report.max_discrepancy = std::max(report.max_discrepancy, l1);
  }
  return report;
}

}  // namespace fastdiff
