// Acceptance suite: runs every quantitative claim at desk scale and prints
// one PASS/FAIL line per criterion. Reference point n=2, m=0.75, p=2 unless
// stated; grids sized so the stationary-profile tail mass is < 1e-6 of the
// total at the largest time reached.

#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <random>
#include <string>
#include <vector>

#include "fastdiff/functionals.hpp"
#include "fastdiff/grid.hpp"
#include "fastdiff/params.hpp"
#include "fastdiff/profiles.hpp"
#include "fastdiff/rates.hpp"
#include "fastdiff/solver_physical.hpp"
#include "fastdiff/solver_rescaled.hpp"

using namespace fastdiff;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

int g_failures = 0;

void report(int id, const std::string& name, bool pass, const std::string& detail) {
  std::printf("C%02d %s %s: %s\n", id, pass ? "PASS" : "FAIL", name.c_str(), detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

std::string fmt(const char* format, ...) {
  char buf[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buf, sizeof(buf), format, args);
  va_end(args);
  return buf;
}

const ModelParams kRef{.n = 2, .m = 0.75, .p = 2.0};

ModelParams with_absorption(bool on, double p = 2.0) {
  ModelParams params = kRef;
  params.p = p;
  params.absorption_enabled = on;
  return params;
}

std::vector<double> linspace(double a, double b, int count) {
  std::vector<double> out(count);
  for (int i = 0; i < count; ++i) out[i] = a + (b - a) * i / (count - 1);
  return out;
}

Field gaussian_field(const GridPtr& g, double target_mass, double width) {
  std::vector<double> v(g->cells());
  for (int i = 0; i < g->cells(); ++i) {
    const double r = g->centers()[i];
    v[i] = std::exp(-r * r / (2.0 * width * width));
  }
  Field f(g, std::move(v));
  const double c = target_mass / mass(f);
  std::vector<double> scaled(f.values());
  for (double& x : scaled) x *= c;
  return Field(g, std::move(scaled));
}

RateFit fit_over(const Trajectory& traj, double lo, double hi,
                 double (*pick)(const Diagnostics&), int log_power) {
  std::vector<Sample> series;
  for (const auto& snap : traj.snapshots) series.push_back({snap.time, pick(snap.diag)});
  return fit_exponential(series, {lo, hi}, log_power);
}

// --------------------------------------------------------------------------
// C1: stationarity of the sampled profile under the rescaled flow
// --------------------------------------------------------------------------

double stationarity_sup(int cells, const BarenblattSpec& spec) {
  auto g = build_grid(2, 34.0, cells);
  Field rho0 = rho_profile(spec.theta, kRef, g);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.dt_max = 0.02;
  Trajectory traj =
      run_rescaled(rho0, 5.0, with_absorption(false), ctrl, linspace(0.0, 5.0, 26));
  double sup = 0.0;
  for (const auto& snap : traj.snapshots) sup = std::max(sup, l1_distance(snap.field, rho0));
  return sup;
}

void criterion_1() {
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  const double sup_coarse = stationarity_sup(2048, spec);
  const double sup_fine = stationarity_sup(4096, spec);
  const bool pass = sup_coarse <= 1e-3 && sup_fine <= 0.6 * sup_coarse;
  report(1, "stationarity", pass,
         fmt("sup|rho-rho_M|_1 = %.3e (tol 1e-3), refined = %.3e (need <= 0.6x)", sup_coarse,
             sup_fine));
}

// --------------------------------------------------------------------------
// C2 + part of C3: self-similar tracking in the physical frame
// --------------------------------------------------------------------------

StepAudit criterion_2() {
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  auto g = build_grid(2, 120.0, 2048, Grading::geometric, 1.002);
  Field u0 = u_profile(spec.beta, kRef, 1.0, g);
  StepControl ctrl;
  ctrl.dt_init = 1e-4;
  ctrl.dt_max = 2e-3;
  Trajectory traj =
      run_physical(u0, 3.0, with_absorption(false), ctrl, linspace(0.25, 3.0, 12));
  double worst = 0.0;
  for (const auto& snap : traj.snapshots) {
    Field exact = u_profile(spec.beta, kRef, 1.0 + snap.time, g);
    worst = std::max(worst, l1_distance(snap.field, exact));
  }
  report(2, "self-similar tracking", worst <= 5e-3,
         fmt("max|u - U_M(1+t)|_1 = %.3e over t in [0,3] (tol 5e-3)", worst));
  return traj.audit;
}

// --------------------------------------------------------------------------
// C4 + part of C3: L-infinity decay rate of the absorbing flow
// --------------------------------------------------------------------------

StepAudit criterion_4() {
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  auto g = build_grid(2, 4500.0, 2048, Grading::geometric, 1.0025);
  Field u0 = u_profile(spec.beta, kRef, 1.0, g);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.dt_max = 2.0;
  const double t_end = 1000.0;
  const DerivedConstants c = derive_constants(kRef);
  // log-spaced snapshots for the ln(1+lambda t) fit
  std::vector<double> times(65);
  const double smax = std::log1p(c.lambda * t_end);
  for (size_t i = 0; i < times.size(); ++i) {
    times[i] = std::expm1(smax * i / (times.size() - 1)) / c.lambda;
  }
  times.back() = t_end;
  Trajectory traj = run_physical(u0, t_end, kRef, ctrl, times);

  std::vector<Sample> series;
  for (const auto& snap : traj.snapshots) series.push_back({snap.time, snap.diag.linf});
  const RateFit fit = fit_power(series, c.lambda, default_power_window(series, c.lambda));
  const bool pass = fit.slope <= -1.0 + 0.05 && std::abs(fit.slope + 4.0 / 3.0) <= 0.05;
  report(4, "decay rate", pass,
         fmt("Linf slope vs ln(1+lambda t) = %.4f (need <= -0.95 and within 0.05 of -4/3)",
             fit.slope));
  return traj.audit;
}

// --------------------------------------------------------------------------
// C5..C10 share the delta = 0.5 reference run
// --------------------------------------------------------------------------

struct ReferenceRun {
  Trajectory traj;
  GridPtr grid;
};

ReferenceRun make_reference_run() {
  ReferenceRun run;
  run.grid = build_grid(2, 34.0, 2048);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.dt_max = 0.02;
  Field rho0 = gaussian_field(run.grid, 0.3, 0.35);
  run.traj = run_rescaled(rho0, 8.0, kRef, ctrl, linspace(0.0, 8.0, 161));
  return run;
}

const Diagnostics& at_time(const Trajectory& traj, double s) {
  size_t best = 0;
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    if (std::abs(traj.snapshots[i].time - s) < std::abs(traj.snapshots[best].time - s)) best = i;
  }
  return traj.snapshots[best].diag;
}

void criterion_5(const ReferenceRun& run) {
  const auto& snaps = run.traj.snapshots;
  const double M0 = snaps.front().diag.M;
  double worst_rise = 0.0;
  for (size_t i = 1; i < snaps.size(); ++i) {
    worst_rise = std::max(worst_rise, snaps[i].diag.M - snaps[i - 1].diag.M);
  }
  const double M6 = at_time(run.traj, 6.0).M;
  const double M8 = at_time(run.traj, 8.0).M;
  const double ode_resid = run.traj.audit.max_mass_ode_residual;
  const bool pass = worst_rise <= 0.0 && M8 > 0.0 && ode_resid <= 1e-6 * M0 &&
                    std::abs(M8 - M6) <= 1e-3 * M0;
  report(5, "mass limit", pass,
         fmt("M monotone (worst rise %.1e), M(8)=%.4f>0, ode residual %.2e (tol %.1e), "
             "|M(8)-M(6)|=%.2e (tol %.1e)",
             worst_rise, M8, ode_resid, 1e-6 * M0, std::abs(M8 - M6), 1e-3 * M0));
}

void criterion_6(const ReferenceRun& run) {
  const auto& snaps = run.traj.snapshots;
  const double I2 = at_time(run.traj, 2.0).second_moment;
  const double I8 = at_time(run.traj, 8.0).second_moment;
  double sup = 0.0;
  for (const auto& s : snaps) sup = std::max(sup, s.diag.second_moment);
  double worst_resid = 0.0;
  for (size_t k = 0; k + 1 < snaps.size(); ++k) {
    const double lhs = snaps[k + 1].diag.second_moment - snaps[k].diag.second_moment;
    const double rhs = run.traj.moment_rhs_integral[k];
    const double scale = std::max(std::abs(snaps[k].diag.second_moment), 1.0);
    worst_resid = std::max(worst_resid, std::abs(lhs - rhs) / scale);
  }
  const bool pass = std::isfinite(sup) && I8 <= 2.0 * I2 && worst_resid <= 1e-3;
  report(6, "second moment", pass,
         fmt("sup=%.4f, I(8)/I(2)=%.3f (tol 2), worst ODE residual %.2e (tol 1e-3)", sup,
             I8 / I2, worst_resid));
}

void criterion_7(const ReferenceRun& run) {
  const RateFit l1 = fit_over(
      run.traj, 2.0, 8.0, [](const Diagnostics& d) { return d.l1_dist_to_profile; }, 0);
  const RateFit erel =
      fit_over(run.traj, 2.0, 8.0, [](const Diagnostics& d) { return d.entropy_rel; }, 0);
  const bool pass = -l1.slope >= 0.45 && -erel.slope >= 0.90;
  report(7, "convergence to Barenblatt", pass,
         fmt("L1 rate %.3f (need >= 0.45), E_rel rate %.3f (need >= 0.90) over s in [2,8]",
             -l1.slope, -erel.slope));
}

void criterion_9(const ReferenceRun& run) {
  std::vector<Sample> series;
  for (const auto& snap : run.traj.snapshots) {
    series.push_back({snap.time, std::max(snap.diag.entropy_rel, 0.0)});
  }
  const GronwallReport rep = gronwall_check(series, derive_constants(kRef).delta);
  const bool pass = rep.violations == 0 && std::isfinite(rep.C_min);
  report(9, "gronwall chain", pass,
         fmt("C_min=%.3e, violations=%d, restarts=%d", rep.C_min, rep.violations, rep.restarts));
}

void criterion_10(const ReferenceRun& run) {
  double worst_identity = 0.0, worst_ck = kInf, worst_upper = kInf;
  double prev_theta = 0.0;
  for (const auto& snap : run.traj.snapshots) {
    const Diagnostics& d = snap.diag;
    worst_identity = std::max(
        worst_identity,
        std::abs(d.bregman_div - d.entropy_rel) / std::max(std::abs(d.bregman_div), 1.0));
    const BarenblattSpec spec = solve_theta_on_grid(d.M, kRef, run.grid, prev_theta);
    prev_theta = spec.theta;
    worst_ck = std::min(worst_ck, ck_check(snap.field, spec, kRef));
    worst_upper =
        std::min(worst_upper, relative_entropy_upper(snap.field, kRef) + 1e-6 - d.entropy_rel);
  }
  const bool pass = worst_identity <= 1e-6 && worst_ck >= -1e-6 && worst_upper >= 0.0;
  report(10, "relative entropy identities", pass,
         fmt("max|D-E_rel|/max(D,1)=%.2e (tol 1e-6), min ck margin=%.2e (tol -1e-6), "
             "min upper-bound slack=%.2e",
             worst_identity, worst_ck, worst_upper));
}

// --------------------------------------------------------------------------
// C8: critical log case delta = 1 (p = 2.25)
// --------------------------------------------------------------------------

void criterion_8() {
  const ModelParams params = with_absorption(true, 2.25);  // delta = 1 exactly
  const BarenblattSpec spec = solve_theta(1.0, params);
  auto g = build_grid(2, 34.0, 2048);
  Field rho0 = rho_profile(spec.theta, params, g);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.dt_max = 0.02;
  Trajectory traj = run_rescaled(rho0, 8.0, params, ctrl, linspace(0.0, 8.0, 161));

  std::vector<Sample> series;
  for (const auto& snap : traj.snapshots) {
    series.push_back({snap.time, snap.diag.l1_dist_to_profile});
  }
  const FitWindow window{2.0, 8.0};
  const RateFit plain = fit_exponential(series, window);
  const RateFit withlog = fit_exponential(series, window, 1);
  // informational: the pre-floor window shows the decay rate itself meets
  // the theorem's min{1,delta} = 1 even when the log-factor shape does not
  // emerge from the measured dynamics
  const RateFit clean = fit_exponential(series, {2.0, 5.0});
  const bool pass =
      withlog.rms_residual <= plain.rms_residual && std::abs(withlog.slope + 1.0) <= 0.1;
  report(8, "critical log case", pass,
         fmt("plain rms=%.4f slope=%.3f; log-corrected rms=%.4f slope=%.3f (need rms<=plain "
             "and slope within 0.1 of -1); pre-floor plain rate %.3f vs theorem 1",
             plain.rms_residual, plain.slope, withlog.rms_residual, withlog.slope,
             -clean.slope));
}

// --------------------------------------------------------------------------
// C11: inequality suite
// --------------------------------------------------------------------------

void criterion_11() {
  bool pass = true;
  std::string detail;

  {
    std::mt19937_64 rng(987654321u);
    std::uniform_real_distribution<double> logab(std::log(1e-6), std::log(1e6));
    std::uniform_real_distribution<double> dr(1e-9, 8.0);
    double worst = kInf;
    for (int i = 0; i < 100000; ++i) {
      worst = std::min(
          worst, elementary_inequality(std::exp(logab(rng)), std::exp(logab(rng)), dr(rng)));
    }
    pass = pass && worst >= 0.0;
    detail += fmt("elementary worst=%.2e; ", worst);
  }

  {
    const auto make = [&](double cdil) {
      auto g = build_grid(2, 40.0 / cdil, 2048);
      std::vector<double> v(2048);
      for (int i = 0; i < 2048; ++i) {
        const double y = g->centers()[i];
        v[i] = cdil * cdil * std::exp(-(cdil * y) * (cdil * y) / 10.0);
      }
      return Field(g, std::move(v));
    };
    const Field base = make(1.0);
    const InequalitySides sh0 = shannon_sides(base, kRef);
    const InequalitySides na0 = nash_sides(base);
    double worst = 0.0;
    for (double cdil : {0.5, 2.0, 4.0}) {
      const Field f = make(cdil);
      const InequalitySides sh = shannon_sides(f, kRef);
      const InequalitySides na = nash_sides(f);
      worst = std::max(worst, std::abs(sh.lhs / sh.rhs_core / (sh0.lhs / sh0.rhs_core) - 1.0));
      worst = std::max(worst, std::abs(na.lhs / na.rhs_core / (na0.lhs / na0.rhs_core) - 1.0));
    }
    pass = pass && worst <= 1e-8;
    detail += fmt("dilation dev=%.1e (tol 1e-8); ", worst);
  }

  {
    double sh_max = 0.0, na_max = 0.0;
    for (double lt = -2.0; lt <= 2.0 + 1e-9; lt += 0.25) {
      const double theta = std::pow(10.0, lt);
      auto g = build_grid(2, 34.0 * std::sqrt(theta / 11.0), 2048);
      Field prof = rho_profile(theta, kRef, g);
      const InequalitySides sh = shannon_sides(prof, kRef);
      const InequalitySides na = nash_sides(prof);
      sh_max = std::max(sh_max, sh.lhs / sh.rhs_core);
      na_max = std::max(na_max, na.lhs / na.rhs_core);
    }
    pass = pass && sh_max < 100.0 && na_max < 100.0;
    detail += fmt("theta-sweep ratios sh=%.3f na=%.3f (bounded); ", sh_max, na_max);
  }

  {
    double sup = 0.0;
    for (double R : {1.0, 10.0, 100.0}) {
      for (double a = 0.1; a < 0.95; a += 0.1) {
        sup = std::max(sup, cutoff_bound_ratio(R, a, 20000));
      }
    }
    pass = pass && sup <= 2.0;
    detail += fmt("cutoff sup=%.3f (tol 2)", sup);
  }
  report(11, "inequality suite", pass, detail);
}

// --------------------------------------------------------------------------
// C12: weak-form residual refinement
// --------------------------------------------------------------------------

double weak_residual_at(int cells, double dt, int steps, double R_test) {
  const BarenblattSpec spec = solve_theta(1.0, kRef);
  auto g = build_grid(2, 60.0, cells);
  Field u0 = u_profile(spec.beta, kRef, 1.0, g);
  StepControl ctrl;
  ctrl.dt_init = dt;
  ctrl.dt_min = dt * 1e-6;
  ctrl.dt_max = dt;
  std::vector<double> times(steps + 1);
  for (int i = 0; i <= steps; ++i) times[i] = dt * i;
  Trajectory traj = run_physical(u0, dt * steps, kRef, ctrl, times);
  return weak_residual(traj, cutoff_test_function(R_test), kRef);
}

void criterion_12() {
  // eta_R has a derivative kink at r = R; placing R on a cell face of both
  // grids keeps the quadrature of the discontinuous integrand clean, so the
  // refinement study measures the time-discretization order it targets
  const double R_test = 104.0 * (60.0 / 1024.0);  // face of both grids
  const double coarse = weak_residual_at(1024, 4e-3, 250, R_test);
  const double fine = weak_residual_at(2048, 2e-3, 500, R_test);
  const double ratio = fine / coarse;
  const bool pass = ratio >= 0.4 && ratio <= 0.6;
  report(12, "weak-form residual", pass,
         fmt("residual %.3e -> %.3e under (h,dt) halving, ratio %.3f (need 0.5 +/- 20%%)", coarse,
             fine, ratio));
}

// --------------------------------------------------------------------------
// C13: epsilon robustness and physical/rescaled cross check
// --------------------------------------------------------------------------

void criterion_13() {
  auto g = build_grid(2, 34.0, 2048);
  StepControl ctrl;
  ctrl.dt_init = 1e-3;
  ctrl.dt_max = 0.02;
  ModelParams pa = kRef;
  pa.epsilon = 1e-8;
  ModelParams pb = kRef;
  pb.epsilon = 5e-9;
  Field rho0 = gaussian_field(g, 0.3, 0.35);
  const auto snaps = linspace(0.0, 8.0, 9);
  Trajectory ta = run_rescaled(rho0, 8.0, pa, ctrl, snaps);
  Trajectory tb = run_rescaled(rho0, 8.0, pb, ctrl, snaps);
  const double eps_diff = l1_distance(ta.snapshots.back().field, tb.snapshots.back().field);

  const double t_end = t_of_s(1.0, derive_constants(kRef).lambda);
  const double blow = scale_factor(t_end, derive_constants(kRef).lambda);
  auto grid_resc = build_grid(2, 34.0, 2048);
  auto grid_phys = build_grid(2, 34.0 * blow, 2048);
  StepControl cctrl;
  cctrl.dt_init = 2e-4;
  cctrl.dt_max = 1e-3;
  const CrossCheckReport rep = cross_check_physical_rescaled(
      [](double r) { return 0.1 * std::exp(-r * r / 2.0); }, kRef, cctrl, grid_phys, grid_resc,
      t_end, 4);

  const bool pass = eps_diff <= 1e-4 && rep.max_discrepancy <= 1e-3;
  report(13, "epsilon robustness and cross-check", pass,
         fmt("|u_eps - u_eps/2|_1 = %.2e (tol 1e-4), cross-check discrepancy %.2e (tol 1e-3)",
             eps_diff, rep.max_discrepancy));
}

// --------------------------------------------------------------------------
// C3: L^r contraction audits of the physical runs
// --------------------------------------------------------------------------

void criterion_3(const std::vector<StepAudit>& audits, double newton_tol) {
  double worst = 0.0;
  for (const auto& a : audits) {
    worst = std::max({worst, a.max_l1_increase, a.max_l2_increase, a.max_linf_increase});
  }
  const bool pass = worst <= 10.0 * newton_tol;
  report(3, "L^r contraction", pass,
         fmt("worst per-step norm increase %.2e over %zu physical runs (tol %.1e)", worst,
             audits.size(), 10.0 * newton_tol));
}

}  // namespace

int main() {
  std::printf("fastdiff acceptance suite (n=2, m=0.75 reference point)\n");

  criterion_1();
  std::vector<StepAudit> physical_audits;
  physical_audits.push_back(criterion_2());

  const ReferenceRun ref = make_reference_run();
  criterion_5(ref);
  criterion_6(ref);
  criterion_7(ref);
  criterion_9(ref);
  criterion_10(ref);

  physical_audits.push_back(criterion_4());
  criterion_3(physical_audits, StepControl{}.newton_tol);

  criterion_8();
  criterion_11();
  criterion_12();
  criterion_13();

  if (g_failures == 0) {
    std::printf("acceptance: all 13 criteria passed\n");
  } else {
    std::printf("acceptance: %d criterion(s) failed\n", g_failures);
  }
  return g_failures == 0 ? 0 : 1;
}
