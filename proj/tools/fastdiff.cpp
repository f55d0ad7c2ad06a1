// fastdiff: configuration-driven driver for the absorbing fast-diffusion lab.
//
// Subcommands:
//   profile    solve the mass-matched stationary profile and export it
//   simulate   run the physical or rescaled solver per config
//   verify     run a named check suite (decay|convergence|inequalities|odes|cross-check)
//   sweep      run a parameter sweep and aggregate rate fits
//   report     summarize a run directory into report.md
//
// Exit codes: 0 pass, 1 check failure, 2 configuration error, 3 solver failure.

#include <algorithm>
#include <atomic>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "fastdiff/config.hpp"
#include "fastdiff/functionals.hpp"
#include "fastdiff/grid.hpp"
#include "fastdiff/io.hpp"
#include "fastdiff/params.hpp"
#include "fastdiff/profiles.hpp"
#include "fastdiff/rates.hpp"
#include "fastdiff/solver_physical.hpp"
#include "fastdiff/solver_rescaled.hpp"

namespace fs = std::filesystem;
using namespace fastdiff;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitCheckFailure = 1;
constexpr int kExitConfigError = 2;
constexpr int kExitSolverFailure = 3;

constexpr double kInf = std::numeric_limits<double>::infinity();

ModelParams parse_params(const Config& cfg) {
  ModelParams p;
  p.n = cfg.get_int("n");
  p.m = cfg.get_double("m");
  p.p = cfg.get_double("p");
  p.epsilon = cfg.get_double("epsilon", 1e-8);
  p.absorption_enabled = cfg.get_bool("absorption", true);
  p.validate();
  return p;
}

GridPtr parse_grid(const Config& cfg, const ModelParams& params) {
  const double r_max = cfg.get_double("R_max");
  const int cells = cfg.get_int("cells");
  const std::string grading = cfg.get_string("grading", "uniform");
  if (grading == "uniform") return build_grid(params.n, r_max, cells);
  if (grading.rfind("geometric:", 0) == 0) {
    const double ratio = std::stod(grading.substr(10));
    return build_grid(params.n, r_max, cells, Grading::geometric, ratio);
  }
  throw ConfigError("grading must be 'uniform' or 'geometric:<ratio>', got '" + grading + "'");
}

StepControl parse_ctrl(const Config& cfg) {
  StepControl c;
  c.dt_init = cfg.get_double("dt_init", 1e-3);
  c.dt_min = cfg.get_double("dt_min", 1e-12);
  c.dt_max = cfg.get_double("dt_max", 0.02);
  c.newton_tol = cfg.get_double("newton_tol", 1e-11);
  c.newton_max_iter = cfg.get_int("newton_max_iter", 30);
  c.validate();
  return c;
}

/// initial = barenblatt:M | gaussian:M,width | file:path
Field parse_initial(const Config& cfg, const GridPtr& grid, const ModelParams& params,
                    const std::string& solver) {
  const std::string spec = cfg.get_string("initial", "barenblatt:1");
  const size_t colon = spec.find(':');
  const std::string kind = spec.substr(0, colon);
  const std::string args = colon == std::string::npos ? "" : spec.substr(colon + 1);
  if (kind == "barenblatt") {
    const double M = args.empty() ? 1.0 : std::stod(args);
    const BarenblattSpec bb = solve_theta(M, params);
    if (solver == "physical") return u_profile(bb.beta, params, 1.0, grid);
    return rho_profile(bb.theta, params, grid);
  }
  if (kind == "gaussian") {
    const size_t comma = args.find(',');
    if (comma == std::string::npos) throw ConfigError("initial=gaussian needs 'gaussian:M,width'");
    const double M = std::stod(args.substr(0, comma));
    const double width = std::stod(args.substr(comma + 1));
    std::vector<double> v(grid->cells());
    for (int i = 0; i < grid->cells(); ++i) {
      const double r = grid->centers()[i];
      v[i] = std::exp(-r * r / (2.0 * width * width));
    }
    Field f(grid, std::move(v));
    const double c = M / mass(f);
    std::vector<double> scaled(f.values());
    for (double& x : scaled) x *= c;
    return Field(grid, std::move(scaled));
  }
  if (kind == "file") return read_field_csv(args, grid);
  throw ConfigError("initial must be barenblatt:M, gaussian:M,width or file:path");
}

std::vector<double> snapshot_times(const Config& cfg, const ModelParams& params,
                                   const std::string& solver, double horizon) {
  const int count = std::max(cfg.get_int("snapshots", 33), 2);
  const std::string fallback = solver == "physical" ? "log" : "linear";
  const std::string spacing = cfg.get_string("snapshot_spacing", fallback);
  std::vector<double> out(count);
  if (spacing == "linear") {
    for (int i = 0; i < count; ++i) out[i] = horizon * i / (count - 1);
  } else if (spacing == "log") {
    const double lambda = derive_constants(params).lambda;
    const double smax = std::log1p(lambda * horizon);
    for (int i = 0; i < count; ++i) out[i] = std::expm1(smax * i / (count - 1)) / lambda;
    out.back() = horizon;
  } else {
    throw ConfigError("snapshot_spacing must be linear or log");
  }
  return out;
}

void ensure_outdir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw ConfigError("cannot create outdir '" + dir.string() + "': " + ec.message());
}

nlohmann::ordered_json audit_json(const StepAudit& a) {
  nlohmann::ordered_json j;
  j["steps"] = a.steps;
  j["rejected"] = a.rejected;
  j["newton_iterations"] = a.newton_iterations;
  j["min_dt"] = a.min_dt;
  j["max_dt"] = a.max_dt;
  j["max_newton_residual"] = a.max_newton_residual;
  j["max_mass_ode_residual"] = a.max_mass_ode_residual;
  j["max_l1_increase"] = a.max_l1_increase;
  j["max_l2_increase"] = a.max_l2_increase;
  j["max_linf_increase"] = a.max_linf_increase;
  return j;
}

struct CheckRow {
  std::string name;
  long long samples;
  double worst_margin;
  bool pass;
};

struct RateRow {
  std::string quantity;
  std::string model;
  double fitted_slope;
  double theorem_slope;
  bool pass;
};

const char* model_name(RateModel m) {
  switch (m) {
    case RateModel::power_in_one_plus_lambda_t: return "power-in-(1+lambda*t)";
    case RateModel::exponential_in_s: return "exponential-in-s";
    case RateModel::exp_with_log_factor: return "exp-with-log-factor";
  }
  return "?";
}

void write_rates_csv(const fs::path& path, const std::vector<RateRow>& rows) {
  std::ofstream out(path);
  out << "# " << kCsvSchemaVersion << " rates\n";
  out << "quantity,model,fitted_slope,theorem_slope,pass\n";
  for (const auto& r : rows) {
    out << r.quantity << ',' << r.model << ',' << format_double(r.fitted_slope) << ','
        << format_double(r.theorem_slope) << ',' << (r.pass ? 1 : 0) << '\n';
  }
}

void write_check_csv(const fs::path& path, const std::vector<CheckRow>& rows) {
  std::ofstream out(path);
  out << "# " << kCsvSchemaVersion << " checks\n";
  out << "check_name,samples,worst_margin,pass\n";
  for (const auto& r : rows) {
    out << r.name << ',' << r.samples << ',' << format_double(r.worst_margin) << ','
        << (r.pass ? 1 : 0) << '\n';
  }
}

// ---------------------------------------------------------------------------
// profile
// ---------------------------------------------------------------------------

int cmd_profile(const Config& cfg) {
  const ModelParams params = parse_params(cfg);
  const GridPtr grid = parse_grid(cfg, params);
  const fs::path outdir = cfg.get_string("outdir", "out_profile");
  ensure_outdir(outdir);

  const double M = cfg.get_double("M", 1.0);
  const double t0 = cfg.get_double("t0", 1.0);
  const BarenblattSpec spec = solve_theta(M, params);

  write_field_csv((outdir / "profile_rho.csv").string(), rho_profile(spec.theta, params, grid));
  write_field_csv((outdir / "profile_u.csv").string(), u_profile(spec.beta, params, t0, grid));

  nlohmann::ordered_json rec;
  rec["M"] = spec.M;
  rec["theta"] = spec.theta;
  rec["beta"] = spec.beta;
  rec["residual"] = spec.mass_residual;
  std::ofstream(outdir / "barenblatt.json") << rec.dump(2) << '\n';
  std::cout << "profile: M=" << M << " theta=" << format_double(spec.theta)
            << " beta=" << format_double(spec.beta) << '\n';
  return kExitPass;
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

int cmd_simulate(const Config& cfg) {
  const ModelParams params = parse_params(cfg);
  const GridPtr grid = parse_grid(cfg, params);
  const StepControl ctrl = parse_ctrl(cfg);
  const std::string solver = cfg.get_string("solver", "rescaled");
  if (solver != "physical" && solver != "rescaled") {
    throw ConfigError("solver must be physical or rescaled");
  }
  const fs::path outdir = cfg.get_string("outdir", "out_simulate");
  ensure_outdir(outdir);

  const double horizon = solver == "physical" ? cfg.get_double("t_end") : cfg.get_double("s_end");
  const Field initial = parse_initial(cfg, grid, params, solver);
  const std::vector<double> times = snapshot_times(cfg, params, solver, horizon);

  Trajectory traj;
  try {
    traj = solver == "physical" ? run_physical(initial, horizon, params, ctrl, times)
                                : run_rescaled(initial, horizon, params, ctrl, times);
  } catch (const SolverError& err) {
    std::cerr << "solver failure: " << err.what() << " (last good time " << err.time << ")\n";
    return kExitSolverFailure;
  }

  write_diagnostics_csv((outdir / "diagnostics.csv").string(), traj);
  for (size_t i = 0; i < traj.snapshots.size(); ++i) {
    char name[48];
    std::snprintf(name, sizeof(name), "snapshot_%03zu.csv", i);
    write_field_csv((outdir / name).string(), traj.snapshots[i].field);
  }

  nlohmann::ordered_json manifest;
  manifest["solver"] = solver;
  manifest["n"] = params.n;
  manifest["m"] = params.m;
  manifest["p"] = params.p;
  manifest["epsilon"] = params.epsilon;
  manifest["absorption"] = params.absorption_enabled;
  manifest["horizon"] = horizon;
  manifest["snapshots"] = traj.snapshots.size();
  manifest["audit"] = audit_json(traj.audit);
  const DerivedConstants c = derive_constants(params);
  manifest["lambda"] = c.lambda;
  manifest["delta"] = c.delta;
  std::ofstream(outdir / "run.json") << manifest.dump(2) << '\n';
  std::cout << "simulate: " << traj.audit.steps << " steps, " << traj.snapshots.size()
            << " snapshots -> " << outdir.string() << '\n';
  return kExitPass;
}

// ---------------------------------------------------------------------------
// verify
// ---------------------------------------------------------------------------

DiagnosticsTable load_diagnostics(const Config& cfg) {
  const fs::path outdir = cfg.get_string("outdir", "out_simulate");
  const fs::path path = outdir / "diagnostics.csv";
  if (!fs::exists(path)) {
    throw ConfigError("verify: missing trajectory file '" + path.string() +
                      "' (run simulate first)");
  }
  return read_diagnostics_csv(path.string());
}

std::vector<Sample> to_samples(const std::vector<double>& t, const std::vector<double>& v) {
  std::vector<Sample> out;
  for (size_t i = 0; i < t.size(); ++i) out.push_back({t[i], v[i]});
  return out;
}

std::vector<CheckRow> suite_decay(const Config& cfg, std::vector<RateRow>& rates_out) {
  const ModelParams params = parse_params(cfg);
  const DiagnosticsTable table = load_diagnostics(cfg);
  if (table.column("t") < 0) throw ConfigError("decay suite expects physical diagnostics");
  const auto t = table.series("t");
  std::vector<CheckRow> rows;

  for (const char* col : {"L1", "L2", "Linf"}) {
    const auto v = table.series(col);
    double worst = 0.0;
    for (size_t i = 1; i < v.size(); ++i) worst = std::max(worst, v[i] - v[i - 1]);
    rows.push_back({std::string(col) + "_nonincreasing", static_cast<long long>(v.size()), -worst,
                    worst <= 1e-9});
  }

  const TheoremRates rates = theorem_rates(params, kInf);
  const double bound = rates.decay_exponent_thm13_strong.value_or(rates.decay_exponent_thm13);
  const auto series = to_samples(t, table.series("Linf"));
  const double lambda = derive_constants(params).lambda;
  const RateFit fit = fit_power(series, lambda, default_power_window(series, lambda));
  const double margin = -fit.slope - (bound - 0.05);  // one-sided: at least as fast
  rows.push_back({"Linf_decay_rate", fit.points, margin, margin >= 0.0});
  rates_out.push_back({"Linf", model_name(fit.model), fit.slope, -bound, margin >= 0.0});
  return rows;
}

std::vector<CheckRow> suite_convergence(const Config& cfg, std::vector<RateRow>& rates_out) {
  const ModelParams params = parse_params(cfg);
  const DiagnosticsTable table = load_diagnostics(cfg);
  if (table.column("s") < 0) throw ConfigError("convergence suite expects rescaled diagnostics");
  const auto s = table.series("s");
  const DerivedConstants c = derive_constants(params);
  const double mind = std::min(1.0, c.delta);
  const bool log_case = std::abs(c.delta - 1.0) <= kLogCriticalTol;
  std::vector<CheckRow> rows;

  const auto l1 = to_samples(s, table.series("L1_dist_to_profile"));
  const auto erel = to_samples(s, table.series("E_rel"));
  // the asymptotic claims cover everything past the initial transient; the
  // default window starts at a quarter of the horizon (s in [2, 8] for the
  // reference run)
  const FitWindow window{cfg.get_double("fit_start", 0.25 * s.back()),
                         cfg.get_double("fit_end", s.back())};
  if (!log_case) {
    const RateFit l1fit = fit_exponential(l1, window);
    rows.push_back({"L1_convergence_rate", l1fit.points, -l1fit.slope - (mind - 0.05),
                    -l1fit.slope >= mind - 0.05});
    rates_out.push_back({"L1_dist_to_profile", model_name(l1fit.model), l1fit.slope, -mind,
                         -l1fit.slope >= mind - 0.05});
    const RateFit efit = fit_exponential(erel, window);
    rows.push_back({"E_rel_convergence_rate", efit.points, -efit.slope - (2.0 * mind - 0.10),
                    -efit.slope >= 2.0 * mind - 0.10});
    rates_out.push_back({"E_rel", model_name(efit.model), efit.slope, -2.0 * mind,
                         -efit.slope >= 2.0 * mind - 0.10});
  } else {
    const RateFit plain = fit_exponential(l1, window);
    const RateFit withlog = fit_exponential(l1, window, 1);
    rows.push_back({"log_fit_residual_improves", withlog.points,
                    plain.rms_residual - withlog.rms_residual,
                    withlog.rms_residual <= plain.rms_residual});
    rows.push_back({"log_corrected_slope", withlog.points, 0.1 - std::abs(withlog.slope + 1.0),
                    std::abs(withlog.slope + 1.0) <= 0.1});
    rates_out.push_back({"L1_dist_to_profile", model_name(withlog.model), withlog.slope, -1.0,
                         std::abs(withlog.slope + 1.0) <= 0.1});
  }
  return rows;
}

std::vector<CheckRow> suite_odes(const Config& cfg) {
  const DiagnosticsTable table = load_diagnostics(cfg);
  if (table.column("s") < 0) throw ConfigError("odes suite expects rescaled diagnostics");
  const auto M = table.series("M");
  std::vector<CheckRow> rows;

  double worst_rise = 0.0;
  double min_mass = kInf;
  for (size_t i = 0; i < M.size(); ++i) {
    if (i > 0) worst_rise = std::max(worst_rise, M[i] - M[i - 1]);
    min_mass = std::min(min_mass, M[i]);
  }
  rows.push_back({"mass_nonincreasing", static_cast<long long>(M.size()), -worst_rise,
                  worst_rise <= 1e-12 * std::abs(M.front())});
  rows.push_back({"mass_positive", static_cast<long long>(M.size()), min_mass, min_mass > 0.0});

  // per-step mass ODE residual from the run manifest
  const fs::path run_json = fs::path(cfg.get_string("outdir", "out_simulate")) / "run.json";
  if (fs::exists(run_json)) {
    nlohmann::json j;
    std::ifstream(run_json) >> j;
    const double resid = j["audit"]["max_mass_ode_residual"].get<double>();
    const double tol = 1e-6 * std::abs(M.front());
    rows.push_back({"mass_ode_residual", 1, tol - resid, resid <= tol});
  }

  // second-moment ODE residual per snapshot interval
  const auto mom = table.series("second_moment");
  const auto rhs = table.series("moment_rhs_integral");
  double worst = 0.0;
  for (size_t i = 1; i < mom.size(); ++i) {
    if (std::isnan(rhs[i])) continue;
    const double scale = std::max(std::abs(mom[i - 1]), 1.0);
    worst = std::max(worst, std::abs(mom[i] - mom[i - 1] - rhs[i]) / scale);
  }
  rows.push_back({"second_moment_ode_residual", static_cast<long long>(mom.size() - 1),
                  1e-3 - worst, worst <= 1e-3});
  return rows;
}

std::vector<CheckRow> suite_inequalities(const Config& cfg) {
  const ModelParams params = parse_params(cfg);
  const uint64_t seed = static_cast<uint64_t>(cfg.get_int("seed", 1234));
  std::vector<CheckRow> rows;

  {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> logab(std::log(1e-6), std::log(1e6));
    std::uniform_real_distribution<double> dr(1e-9, 8.0);
    double worst = kInf;
    const int N = 100000;
    for (int i = 0; i < N; ++i) {
      worst = std::min(
          worst, elementary_inequality(std::exp(logab(rng)), std::exp(logab(rng)), dr(rng)));
    }
    rows.push_back({"elementary_inequality", N, worst, worst >= 0.0});
  }

  {
    // dilation invariance of the Shannon and Nash ratios
    const auto make = [&](double cdil) {
      auto g = build_grid(params.n, 40.0 / cdil, 1024);
      std::vector<double> v(1024);
      for (int i = 0; i < 1024; ++i) {
        const double y = g->centers()[i];
        v[i] = std::pow(cdil, params.n) * std::exp(-(cdil * y) * (cdil * y) / 10.0);
      }
      return Field(g, std::move(v));
    };
    const Field base = make(1.0);
    const InequalitySides sh0 = shannon_sides(base, params);
    const InequalitySides na0 = nash_sides(base);
    double worst_sh = 0.0, worst_na = 0.0;
    for (double cdil : {0.5, 2.0, 4.0}) {
      const Field f = make(cdil);
      const InequalitySides sh = shannon_sides(f, params);
      const InequalitySides na = nash_sides(f);
      worst_sh =
          std::max(worst_sh, std::abs(sh.lhs / sh.rhs_core / (sh0.lhs / sh0.rhs_core) - 1.0));
      worst_na =
          std::max(worst_na, std::abs(na.lhs / na.rhs_core / (na0.lhs / na0.rhs_core) - 1.0));
    }
    rows.push_back({"shannon_dilation_invariance", 4, 1e-8 - worst_sh, worst_sh <= 1e-8});
    rows.push_back({"nash_dilation_invariance", 4, 1e-8 - worst_na, worst_na <= 1e-8});
  }

  {
    // ratio boundedness over the theta sweep on scale-adapted grids
    double sh_min = kInf, sh_max = 0.0, na_min = kInf, na_max = 0.0;
    int count = 0;
    for (double lt = -2.0; lt <= 2.0 + 1e-9; lt += 0.5) {
      const double theta = std::pow(10.0, lt);
      auto g = build_grid(params.n, 34.0 * std::sqrt(theta / 11.0), 2048);
      Field prof = rho_profile(theta, params, g);
      const InequalitySides sh = shannon_sides(prof, params);
      const InequalitySides na = nash_sides(prof);
      sh_min = std::min(sh_min, sh.lhs / sh.rhs_core);
      sh_max = std::max(sh_max, sh.lhs / sh.rhs_core);
      na_min = std::min(na_min, na.lhs / na.rhs_core);
      na_max = std::max(na_max, na.lhs / na.rhs_core);
      ++count;
    }
    rows.push_back(
        {"shannon_ratio_bounded", count, 100.0 - sh_max, sh_max < 100.0 && sh_min > 0.0});
    rows.push_back({"nash_ratio_bounded", count, 100.0 - na_max, na_max < 100.0 && na_min > 0.0});
  }

  {
    double sup = 0.0;
    int count = 0;
    for (double R : {1.0, 10.0, 100.0}) {
      for (double a = 0.1; a < 0.95; a += 0.1) {
        sup = std::max(sup, cutoff_bound_ratio(R, a, 20000));
        ++count;
      }
    }
    rows.push_back({"cutoff_bound_ratio", count, 2.0 - sup, sup <= 2.0});
  }
  return rows;
}

std::vector<CheckRow> suite_cross_check(const Config& cfg) {
  const ModelParams params = parse_params(cfg);
  const GridPtr grid_resc = parse_grid(cfg, params);
  const StepControl ctrl = parse_ctrl(cfg);
  const double t_end = cfg.get_double("t_end", 2.0);
  const DerivedConstants c = derive_constants(params);
  const double blow = scale_factor(t_end, c.lambda);
  const GridPtr grid_phys = build_grid(params.n, grid_resc->r_max() * blow, grid_resc->cells(),
                                       grid_resc->grading(), grid_resc->ratio());

  const Field initial = parse_initial(cfg, grid_resc, params, "rescaled");
  const auto& centers = grid_resc->centers();
  const auto& values = initial.values();
  const auto initial_fn = [&](double r) -> double {
    if (r <= centers.front()) return values.front();
    if (r >= centers.back()) return 0.0;
    const auto it = std::upper_bound(centers.begin(), centers.end(), r);
    const size_t k = it - centers.begin();
    const double frac = (r - centers[k - 1]) / (centers[k] - centers[k - 1]);
    return values[k - 1] + frac * (values[k] - values[k - 1]);
  };

  const CrossCheckReport rep = cross_check_physical_rescaled(
      initial_fn, params, ctrl, grid_phys, grid_resc, t_end, cfg.get_int("checkpoints", 4));
  const double tol = cfg.get_double("cross_check_tol", 1e-3);
  std::vector<CheckRow> rows;
  rows.push_back({"physical_rescaled_discrepancy", static_cast<long long>(rep.rows.size()),
                  tol - rep.max_discrepancy, rep.max_discrepancy <= tol});
  return rows;
}

int cmd_verify(const Config& cfg) {
  const std::string suite = cfg.get_string("suite");
  std::vector<CheckRow> rows;
  std::vector<RateRow> rates;
  if (suite == "decay") {
    rows = suite_decay(cfg, rates);
  } else if (suite == "convergence") {
    rows = suite_convergence(cfg, rates);
  } else if (suite == "inequalities") {
    rows = suite_inequalities(cfg);
  } else if (suite == "odes") {
    rows = suite_odes(cfg);
  } else if (suite == "cross-check") {
    rows = suite_cross_check(cfg);
  } else {
    throw ConfigError("suite must be decay|convergence|inequalities|odes|cross-check");
  }

  const fs::path outdir = cfg.get_string("outdir", "out_simulate");
  ensure_outdir(outdir);
  write_check_csv(outdir / ("verify_" + suite + ".csv"), rows);
  if (!rates.empty()) write_rates_csv(outdir / "rates.csv", rates);

  bool all_pass = true;
  for (const auto& r : rows) {
    std::cout << (r.pass ? "PASS" : "FAIL") << ' ' << r.name
              << " margin=" << format_double(r.worst_margin) << '\n';
    all_pass = all_pass && r.pass;
  }
  return all_pass ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

int cmd_sweep(const Config& cfg) {
  const std::string key = cfg.get_string("sweep_key", "p");
  if (key != "p" && key != "m" && key != "epsilon") {
    throw ConfigError("sweep_key must be p, m or epsilon");
  }
  const std::vector<double> values = cfg.get_double_list("sweep_values");
  const fs::path outdir = cfg.get_string("outdir", "out_sweep");
  ensure_outdir(outdir);
  if (values.empty()) {
    std::cerr << "sweep: empty sweep_values, nothing to do\n";
    return kExitPass;
  }

  struct PointResult {
    bool solver_ok = false;
    bool pass = false;
    double value = 0.0;
    double delta = 0.0;
    double fitted_rate = 0.0;
    double theorem_rate = 0.0;
    std::string error;
  };
  std::vector<PointResult> results(values.size());

  const auto run_point = [&](size_t idx) {
    PointResult& res = results[idx];
    res.value = values[idx];
    try {
      ModelParams params = parse_params(cfg);
      if (key == "p") params.p = values[idx];
      if (key == "m") params.m = values[idx];
      if (key == "epsilon") params.epsilon = values[idx];
      params.validate();
      const GridPtr grid = parse_grid(cfg, params);
      const StepControl ctrl = parse_ctrl(cfg);
      const double s_end = cfg.get_double("s_end", 8.0);
      const Field initial = parse_initial(cfg, grid, params, "rescaled");
      const std::vector<double> times = snapshot_times(cfg, params, "rescaled", s_end);
      Trajectory traj = run_rescaled(initial, s_end, params, ctrl, times);

      const DerivedConstants c = derive_constants(params);
      res.delta = c.delta;
      std::vector<Sample> series;
      for (const auto& snap : traj.snapshots) {
        series.push_back({snap.time, snap.diag.l1_dist_to_profile});
      }
      const bool log_case = std::abs(c.delta - 1.0) <= kLogCriticalTol;
      const FitWindow window{cfg.get_double("fit_start", 0.25 * s_end),
                             cfg.get_double("fit_end", s_end)};
      const RateFit fit = fit_exponential(series, window, log_case ? 1 : 0);
      res.fitted_rate = -fit.slope;
      res.theorem_rate = std::min(1.0, c.delta);
      res.pass = res.fitted_rate >= res.theorem_rate - 0.05;
      res.solver_ok = true;

      char sub[32];
      std::snprintf(sub, sizeof(sub), "point_%02zu", idx);
      ensure_outdir(outdir / sub);
      write_diagnostics_csv((outdir / sub / "diagnostics.csv").string(), traj);
    } catch (const std::exception& err) {
      res.error = err.what();
    }
  };

  const int threads =
      std::max(1, std::min<int>(cfg.get_int("threads", 4), static_cast<int>(values.size())));
  std::vector<std::thread> pool;
  std::atomic<size_t> cursor{0};
  for (int w = 0; w < threads; ++w) {
    pool.emplace_back([&] {
      for (;;) {
        const size_t idx = cursor.fetch_add(1);
        if (idx >= values.size()) return;
        run_point(idx);
      }
    });
  }
  for (auto& th : pool) th.join();

  std::ofstream csv(outdir / "sweep_rates.csv");
  csv << "# " << kCsvSchemaVersion << " sweep\n";
  csv << "index," << key << ",delta,fitted_L1_rate,theorem_rate,pass\n";
  bool any_solver_failure = false;
  bool all_pass = true;
  std::vector<std::string> failed;
  for (size_t i = 0; i < results.size(); ++i) {
    const PointResult& r = results[i];
    if (!r.solver_ok) {
      any_solver_failure = true;
      failed.push_back("point_" + std::to_string(i) + ": " + r.error);
      continue;
    }
    all_pass = all_pass && r.pass;
    csv << i << ',' << format_double(r.value) << ',' << format_double(r.delta) << ','
        << format_double(r.fitted_rate) << ',' << format_double(r.theorem_rate) << ','
        << (r.pass ? 1 : 0) << '\n';
  }
  if (!failed.empty()) {
    std::ofstream manifest(outdir / "failed_points.txt");
    for (const auto& f : failed) manifest << f << '\n';
  }
  std::cout << "sweep: " << results.size() - failed.size() << "/" << results.size()
            << " points completed -> " << (outdir / "sweep_rates.csv").string() << '\n';
  if (any_solver_failure) return kExitSolverFailure;
  return all_pass ? kExitPass : kExitCheckFailure;
}

// ---------------------------------------------------------------------------
// report
// ---------------------------------------------------------------------------

int cmd_report(const Config& cfg) {
  const fs::path outdir = cfg.get_string("outdir", "out_simulate");
  if (!fs::exists(outdir)) throw ConfigError("report: outdir '" + outdir.string() + "' not found");
  std::ostringstream md;
  md << "# fastdiff run report\n\n";

  const fs::path run_json = outdir / "run.json";
  if (fs::exists(run_json)) {
    nlohmann::json j;
    std::ifstream(run_json) >> j;
    md << "## Run\n\n";
    md << "- solver: " << j.value("solver", std::string("?")) << "\n";
    md << "- n=" << j["n"] << ", m=" << j["m"] << ", p=" << j["p"] << ", epsilon=" << j["epsilon"]
       << ", absorption=" << j["absorption"] << "\n";
    md << "- lambda=" << j["lambda"] << ", delta=" << j["delta"] << "\n";
    md << "- horizon=" << j["horizon"] << ", snapshots=" << j["snapshots"] << "\n";
    md << "- steps=" << j["audit"]["steps"] << ", rejected=" << j["audit"]["rejected"] << "\n";
    md << "- max mass-ODE residual=" << j["audit"]["max_mass_ode_residual"] << "\n\n";
  }

  const fs::path diag = outdir / "diagnostics.csv";
  if (fs::exists(diag)) {
    const DiagnosticsTable table = read_diagnostics_csv(diag.string());
    md << "## Trajectory\n\n";
    md << "- rows: " << table.rows.size() << "\n";
    const bool rescaled = table.column("s") >= 0;
    if (!table.rows.empty()) {
      const auto& first = table.rows.front();
      const auto& last = table.rows.back();
      const int tcol = rescaled ? table.column("s") : table.column("t");
      const int mcol = rescaled ? table.column("M") : table.column("mass");
      md << "- time " << first[tcol] << " -> " << last[tcol] << "\n";
      md << "- mass " << first[mcol] << " -> " << last[mcol] << "\n";
      if (rescaled) {
        const int dcol = table.column("L1_dist_to_profile");
        md << "- L1 distance to profile " << first[dcol] << " -> " << last[dcol] << "\n";
      }
    }
    md << "\n";
  }

  for (const char* suite : {"decay", "convergence", "inequalities", "odes", "cross-check"}) {
    const fs::path path = outdir / (std::string("verify_") + suite + ".csv");
    if (!fs::exists(path)) continue;
    md << "## Checks: " << suite << "\n\n";
    md << "| check | samples | worst margin | pass |\n|---|---|---|---|\n";
    std::ifstream in(path);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      if (!header_seen) {
        header_seen = true;
        continue;
      }
      std::istringstream ss(line);
      std::string name, samples, margin, pass;
      std::getline(ss, name, ',');
      std::getline(ss, samples, ',');
      std::getline(ss, margin, ',');
      std::getline(ss, pass, ',');
      md << "| " << name << " | " << samples << " | " << margin << " | "
         << (pass == "1" ? "yes" : "NO") << " |\n";
    }
    md << "\n";
  }

  const fs::path sweep = outdir / "sweep_rates.csv";
  if (fs::exists(sweep)) {
    md << "## Sweep\n\n```\n";
    std::ifstream in(sweep);
    std::string line;
    while (std::getline(in, line)) md << line << "\n";
    md << "```\n";
  }

  std::ofstream(outdir / "report.md") << md.str();
  std::cout << "report -> " << (outdir / "report.md").string() << '\n';
  return kExitPass;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"fastdiff: fast diffusion with absorption, numerically verified"};
  app.require_subcommand(1);

  std::string config_path;
  std::string outdir_override;
  for (const char* name : {"profile", "simulate", "verify", "sweep", "report"}) {
    CLI::App* sub = app.add_subcommand(name);
    sub->add_option("--config,-c", config_path, "key=value config file")->required();
    sub->add_option("--outdir", outdir_override, "override the config outdir");
  }

  CLI11_PARSE(app, argc, argv);
  const std::string sub = app.get_subcommands().front()->get_name();

  try {
    std::ifstream in(config_path);
    if (!in) throw ConfigError("config: cannot open '" + config_path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    if (!outdir_override.empty()) text += "\noutdir=" + outdir_override + "\n";
    const Config cfg = Config::parse_string(text, config_path);

    if (sub == "profile") return cmd_profile(cfg);
    if (sub == "simulate") return cmd_simulate(cfg);
    if (sub == "verify") return cmd_verify(cfg);
    if (sub == "sweep") return cmd_sweep(cfg);
    if (sub == "report") return cmd_report(cfg);
    return kExitConfigError;
  } catch (const ConfigError& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfigError;
  } catch (const SolverError& err) {
    std::cerr << "solver failure: " << err.what() << '\n';
    return kExitSolverFailure;
  } catch (const std::invalid_argument& err) {
    std::cerr << "config error: " << err.what() << '\n';
    return kExitConfigError;
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << '\n';
    return kExitCheckFailure;
  }
}
