#include "fastdiff/functionals.hpp"

#include <cmath>
#include <stdexcept>
#include <vector>

namespace fastdiff {

namespace {

void require_shannon(const ModelParams& params, const char* who) {
  if (!classify_regime(params).shannon_ok) {
    throw std::invalid_argument(std::string(who) + ": requires m > n/(n+2)");
  }
}

double mass_match_or_throw(double mf, double mg, const char* who) {
  const double scale = std::max(std::abs(mg), 1e-300);
  if (std::abs(mf - mg) > 1e-6 * scale) {
    throw std::invalid_argument(std::string(who) + ": masses differ beyond 1e-6 relative");
  }
  return mg;
}

/// D(f|g) with per-cell g values supplied by the caller.
double bregman_impl(const Field& f, const std::vector<double>& g, const ModelParams& params) {
  const double m = params.m;
  const auto& w = f.grid().volumes();
  const auto& fv = f.values();
  double acc = 0.0;
  for (size_t i = 0; i < fv.size(); ++i) {
    if (!(g[i] > 0.0)) {
      throw std::invalid_argument("bregman: g must be strictly positive on the grid");
    }
    const double gm1 = std::pow(g[i], m - 1.0);
    acc += (std::pow(fv[i], m) - gm1 * g[i] - m * gm1 * (fv[i] - g[i])) * w[i];
  }
  return acc / (m - 1.0);
}

std::vector<double> profile_samples(const BarenblattSpec& g, const RadialGrid& grid) {
  std::vector<double> out(grid.cells());
  for (int i = 0; i < grid.cells(); ++i) {
    out[i] = rho_profile_value(g.theta, g.params, grid.centers()[i]);
  }
  return out;
}

double entropy_of_samples(const std::vector<double>& v, const RadialGrid& grid, double m) {
  const auto& w = grid.volumes();
  const auto& c = grid.centers();
  double lm = 0.0, mom = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    lm += std::pow(v[i], m) * w[i];
    mom += v[i] * c[i] * c[i] * w[i];
  }
  return lm / (m - 1.0) + 0.5 * mom;
}

}  // namespace

double entropy(const Field& rho, const ModelParams& params) {
  require_shannon(params, "entropy");
  return entropy_of_samples(rho.values(), rho.grid(), params.m);
}

double bregman(const Field& f, const Field& g, const ModelParams& params) {
  if (f.grid().faces() != g.grid().faces()) {
    throw std::invalid_argument("bregman: fields live on different grids");
  }
  return bregman_impl(f, g.values(), params);
}

double bregman(const Field& f, const BarenblattSpec& g, const ModelParams& params) {
  return bregman_impl(f, profile_samples(g, f.grid()), params);
}

double relative_entropy(const Field& f, const Field& g, const ModelParams& params) {
  require_shannon(params, "relative_entropy");
  return entropy_of_samples(f.values(), f.grid(), params.m) -
         entropy_of_samples(g.values(), g.grid(), params.m);
}

double relative_entropy(const Field& f, const BarenblattSpec& g, const ModelParams& params) {
  require_shannon(params, "relative_entropy");
  return entropy_of_samples(f.values(), f.grid(), params.m) -
         entropy_of_samples(profile_samples(g, f.grid()), f.grid(), params.m);
}

double ck_constant(const Field& g, const ModelParams& params, double M) {
  mass_match_or_throw(mass(g), M, "ck_constant");
  const double m = params.m;
  const auto& w = g.grid().volumes();
  const auto& gv = g.values();
  double acc = 0.0;
  for (size_t i = 0; i < gv.size(); ++i) acc += std::pow(gv[i], 2.0 - m) * w[i];
  return std::pow(M, 0.5 * (m - 2.0)) * std::sqrt(2.0 / m * acc);
}

double ck_constant(const BarenblattSpec& g, const GridPtr& grid) {
  Field gf(grid, profile_samples(g, *grid));
  return ck_constant(gf, g.params, mass(gf));
}

double ck_check(const Field& f, const Field& g, const ModelParams& params) {
  const double M = mass_match_or_throw(mass(f), mass(g), "ck_check");
  const double c = ck_constant(g, params, M);
  return c * std::sqrt(std::max(bregman(f, g, params), 0.0)) - l1_distance(f, g);
}

double ck_check(const Field& f, const BarenblattSpec& g, const ModelParams& params) {
  Field gf(f.grid_ptr(), profile_samples(g, f.grid()));
  const double M = mass_match_or_throw(mass(f), mass(gf), "ck_check");
  const double c = ck_constant(gf, params, M);
  return c * std::sqrt(std::max(bregman(f, g, params), 0.0)) - l1_distance(f, gf);
}

double dissipation(const Field& rho, const ModelParams& params, double floor) {
  const double m = params.m;
  const RadialGrid& grid = rho.grid();
  const auto& v = rho.values();
  const auto& centers = grid.centers();
  const auto& faces = grid.faces();
  const int K = rho.size();
  double acc = 0.0;
  for (int k = 1; k < K; ++k) {
    const double h = centers[k] - centers[k - 1];
    const double area = grid.face_area(k);
    const double lo = std::min(v[k - 1], v[k]);
    double term;
    if (lo >= floor || m <= 0.5) {
      const double cl = std::max(v[k - 1], floor);
      const double cr = std::max(v[k], floor);
      const double phi_l = m / (m - 1.0) * std::pow(cl, m - 1.0) + 0.5 * centers[k - 1] * centers[k - 1];
      const double phi_r = m / (m - 1.0) * std::pow(cr, m - 1.0) + 0.5 * centers[k] * centers[k];
      const double g = (phi_r - phi_l) / h;
      term = 0.5 * (v[k - 1] + v[k]) * g * g;
    } else {
      // expanded form, regular as rho -> 0:
      // (m/(m-1/2))^2 (d rho^{m-1/2})^2 + 2 r d rho^m + r^2 rho
      const double cm = m / (m - 0.5);
      const double dhalf = (std::pow(v[k], m - 0.5) - std::pow(v[k - 1], m - 0.5)) / h;
      const double dm = (std::pow(v[k], m) - std::pow(v[k - 1], m)) / h;
      const double rbar = 0.5 * (v[k - 1] + v[k]);
      term = cm * cm * dhalf * dhalf + 2.0 * faces[k] * dm + faces[k] * faces[k] * rbar;
      term = std::max(term, 0.0);
    }
    acc += area * h * term;
  }
  return acc;
}

double relative_entropy_upper(const Field& rho, const ModelParams& params) {
  return 0.5 * dissipation(rho, params);
}

InequalitySides shannon_sides(const Field& f, const ModelParams& params) {
  require_shannon(params, "shannon_sides");
  const DerivedConstants c = derive_constants(params);
  const double m = params.m;
  const auto& w = f.grid().volumes();
  const auto& fv = f.values();
  double lm = 0.0;
  for (size_t i = 0; i < fv.size(); ++i) lm += std::pow(fv[i], m) * w[i];
  const double m1 = mass(f);
  const double mom = second_moment(f);
  InequalitySides s{};
  s.lhs = lm;
  s.rhs_core = std::pow(m1, m * (1.0 - c.sigma)) * std::pow(mom, m * c.sigma);
  return s;
}

InequalitySides nash_sides(const Field& f) {
  const RadialGrid& grid = f.grid();
  const int n = grid.dim();
  const auto& v = f.values();
  const auto& centers = grid.centers();
  double grad2 = 0.0;
  for (int k = 1; k < f.size(); ++k) {
    const double h = centers[k] - centers[k - 1];
    const double g = (v[k] - v[k - 1]) / h;
    grad2 += grid.face_area(k) * h * g * g;
  }
  InequalitySides s{};
  s.lhs = std::pow(lr_norm(f, 2.0), 1.0 + 2.0 / n);
  s.rhs_core = std::pow(mass(f), 2.0 / n) * std::sqrt(grad2);
  return s;
}

double elementary_inequality(double a, double b, double r) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("elementary_inequality: a and b must be positive");
  }
  if (!(r > 0.0)) throw std::invalid_argument("elementary_inequality: r must be positive");
  const double diff_pow = std::abs(std::pow(a, r) - std::pow(b, r));
  if (r > 1.0) {
    return std::pow(2.0, r - 1.0) * r * (std::pow(a, r - 1.0) + std::pow(b, r - 1.0)) *
               std::abs(a - b) -
           diff_pow;
  }
  return std::pow(std::abs(a - b), r) - diff_pow;
}

double cutoff_eta(double x_norm, double R) {
  if (!(R > 0.0)) throw std::invalid_argument("cutoff_eta: R must be positive");
  const double x = std::abs(x_norm);
  if (x < R) return 1.0;
  if (x >= 2.0 * R) return 0.0;
  return std::exp(1.0 - R / (2.0 * R - x));
}

double cutoff_eta_grad(double x_norm, double R) {
  const double x = std::abs(x_norm);
  if (x < R || x >= 2.0 * R) return 0.0;
  const double w = 2.0 * R - x;
  return cutoff_eta(x, R) * R / (w * w);
}

double cutoff_bound_ratio(double R, double a, int sample_count) {
  if (!(a > 0.0 && a < 1.0)) throw std::invalid_argument("cutoff_bound_ratio: need 0 < a < 1");
  if (sample_count < 2) throw std::invalid_argument("cutoff_bound_ratio: need >= 2 samples");
  double sup = 0.0;
  for (int j = 0; j < sample_count; ++j) {
    const double x = R + (j + 0.5) / sample_count * R;  // inside [R, 2R)
    const double eta = cutoff_eta(x, R);
    const double ratio = cutoff_eta_grad(x, R) * a * a * R * std::pow(eta, a - 1.0);
    sup = std::max(sup, ratio);
  }
  return sup;
}

TestFunction cutoff_test_function(double R) {
  TestFunction phi;
  phi.value = [R](double r, double) { return cutoff_eta(r, R); };
  phi.ddr = [R](double r, double) {
    // signed radial derivative: eta is nonincreasing
    return -cutoff_eta_grad(r, R);
  };
  phi.ddt = [](double, double) { return 0.0; };
  phi.support_radius = 2.0 * R;
  return phi;
}

double weak_residual(const Trajectory& traj, const TestFunction& phi, const ModelParams& params) {
  if (traj.snapshots.size() < 2) {
    throw std::invalid_argument("weak_residual: need at least two snapshots");
  }
  const RadialGrid& grid = traj.snapshots.front().field.grid();
  if (phi.support_radius > 0.0 && phi.support_radius > grid.r_max() * (1.0 + 1e-12)) {
    throw std::invalid_argument("weak_residual: test function support exceeds the grid");
  }
  const double m = params.m;
  const bool sink = params.absorption_enabled;
  const auto& w = grid.volumes();
  const auto& centers = grid.centers();
  const size_t N = traj.snapshots.size();

  std::vector<double> a(N), b(N), flux(N);
  for (size_t j = 0; j < N; ++j) {
    const auto& snap = traj.snapshots[j];
    const auto& u = snap.field.values();
    const double t = snap.time;
    double aj = 0.0, bj = 0.0;
    for (size_t i = 0; i < u.size(); ++i) {
      const double ph = phi.value(centers[i], t);
      aj += u[i] * ph * w[i];
      bj += u[i] * phi.ddt(centers[i], t) * w[i];
      if (sink) bj -= std::pow(u[i], params.p) * ph * w[i];
    }
    double cj = 0.0;  // int grad u^m . grad phi
    for (int k = 1; k < static_cast<int>(u.size()); ++k) {
      const double h = centers[k] - centers[k - 1];
      const double dm = (std::pow(u[k], m) - std::pow(u[k - 1], m)) / h;
      cj += grid.face_area(k) * h * dm * phi.ddr(grid.faces()[k], t);
    }
    a[j] = aj;
    b[j] = bj;
    flux[j] = cj;
  }

  // a(T) - a(0) = int_0^T [ b - flux ] dt  (trapezoid in t)
  double rhs = 0.0;
  for (size_t j = 0; j + 1 < N; ++j) {
    const double dt = traj.snapshots[j + 1].time - traj.snapshots[j].time;
    rhs += 0.5 * dt * ((b[j] - flux[j]) + (b[j + 1] - flux[j + 1]));
  }
  return std::abs(a.back() - a.front() - rhs);
}

EntropyReport entropy_report(const Field& rho, const BarenblattSpec& g, const ModelParams& params) {
  EntropyReport rep{};
  Field gf(rho.grid_ptr(), profile_samples(g, rho.grid()));
  rep.E = entropy(rho, params);
  rep.E_rel = rep.E - entropy_of_samples(gf.values(), rho.grid(), params.m);
  rep.D = bregman(rho, g, params);
  rep.dissipation = dissipation(rho, params);
  rep.ck_constant = ck_constant(gf, params, mass(gf));
  rep.ck_margin = rep.ck_constant * std::sqrt(std::max(rep.D, 0.0)) - l1_distance(rho, gf);
  return rep;
}

double moment_apriori_bound(double mass_value, double c_hat, const ModelParams& params) {
  const DerivedConstants c = derive_constants(params);
  const double msig = params.m * c.sigma;
  if (!(msig < 1.0)) throw std::invalid_argument("moment_apriori_bound: requires m sigma < 1");
  const double coef = 2.0 * params.n * c_hat * std::pow(mass_value, params.m * (1.0 - c.sigma));
  return std::pow(0.5 * coef, 1.0 / (1.0 - msig));
}

}  // namespace fastdiff
