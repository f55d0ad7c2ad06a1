#include "fastdiff/profiles.hpp"

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "fastdiff/quadrature.hpp"

namespace fastdiff {

namespace {

void require_integrable(const ModelParams& params) {
  if (!classify_regime(params).barenblatt_ok) {
    throw std::invalid_argument(
        "profiles: stationary profile not integrable for m <= (n-2)/n (n=" +
        std::to_string(params.n) + ", m=" + std::to_string(params.m) + ")");
  }
}

/// Generic solver for a strictly decreasing mass-vs-theta map.
BarenblattSpec solve_theta_impl(double M, const ModelParams& params,
                                const std::function<double(double)>& mass_fn, double lo_init,
                                double hi_init, double target_rel) {
  if (!(M > 0.0)) throw std::invalid_argument("solve_theta: M must be positive");
  require_integrable(params);

  double lo = lo_init, hi = hi_init;
  // mass_fn is decreasing: want mass_fn(lo) >= M >= mass_fn(hi)
  int guard = 0;
  while (mass_fn(lo) < M) {
    lo *= 0.1;
    if (++guard > 400) throw std::runtime_error("solve_theta: bracket expansion failed (low end)");
  }
  guard = 0;
  while (mass_fn(hi) > M) {
    hi *= 10.0;
    if (++guard > 400) throw std::runtime_error("solve_theta: bracket expansion failed (high end)");
  }

  double llo = std::log(lo), lhi = std::log(hi);
  double theta = std::exp(0.5 * (llo + lhi));
  double rel = 1.0;
  for (int it = 0; it < 200; ++it) {
    theta = std::exp(0.5 * (llo + lhi));
    const double mt = mass_fn(theta);
    rel = std::abs(mt - M) / M;
    if (rel <= target_rel) break;
    if (mt > M) {
      llo = std::log(theta);
    } else {
      lhi = std::log(theta);
    }
  }
  if (!(rel <= target_rel)) {
    throw std::runtime_error("solve_theta: did not reach the target mass residual (rel=" +
                             std::to_string(rel) + ")");
  }

  const DerivedConstants c = derive_constants(params);
  BarenblattSpec spec;
  spec.params = params;
  spec.M = M;
  spec.theta = theta;
  spec.beta = theta * std::pow(c.lambda, 2.0 / c.lambda);
  spec.mass_residual = rel;
  return spec;
}

}  // namespace

double rho_profile_value(double theta, const ModelParams& params, double r) {
  if (!(theta > 0.0)) throw std::invalid_argument("rho_profile: theta must be positive");
  const DerivedConstants c = derive_constants(params);
  return std::pow(c.gamma / (r * r + theta), 1.0 / (1.0 - params.m));
}

double u_profile_value(double beta, const ModelParams& params, double t, double r) {
  if (!(beta > 0.0)) throw std::invalid_argument("u_profile: beta must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("u_profile: t must be positive");
  const DerivedConstants c = derive_constants(params);
  return std::pow(c.alpha * t / (r * r + beta * std::pow(t, 2.0 / c.lambda)),
                  1.0 / (1.0 - params.m));
}

Field rho_profile(double theta, const ModelParams& params, const GridPtr& grid) {
  if (!(theta > 0.0)) throw std::invalid_argument("rho_profile: theta must be positive");
  require_integrable(params);
  std::vector<double> v(grid->cells());
  for (int i = 0; i < grid->cells(); ++i) {
    v[i] = rho_profile_value(theta, params, grid->centers()[i]);
  }
  return Field(grid, std::move(v));
}

Field u_profile(double beta, const ModelParams& params, double t, const GridPtr& grid) {
  if (!(beta > 0.0)) throw std::invalid_argument("u_profile: beta must be positive");
  if (!(t > 0.0)) throw std::invalid_argument("u_profile: t must be positive");
  std::vector<double> v(grid->cells());
  for (int i = 0; i < grid->cells(); ++i) {
    v[i] = u_profile_value(beta, params, t, grid->centers()[i]);
  }
  return Field(grid, std::move(v));
}

double mass_of_theta(double theta, const ModelParams& params, const QuadratureSpec& quad) {
  if (!(theta > 0.0)) throw std::invalid_argument("mass_of_theta: theta must be positive");
  require_integrable(params);
  const DerivedConstants c = derive_constants(params);
  const int n = params.n;
  const double q = 1.0 / (1.0 - params.m);
  const double omega_n = 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
  const double gq = std::pow(c.gamma, q);

  const auto integrand = [&](double r) {
    return std::pow(r, n - 1) * std::pow(c.gamma / (r * r + theta), q);
  };
  // integrand <= gamma^q r^{n-1-2q}; the tail integral of the bound is closed form
  const double tail_power = 2.0 * q - n;  // > 0 in the integrable regime
  const auto tail_bound = [&](double radius) {
    return gq * std::pow(radius, -tail_power) / tail_power;
  };

  double radius = 16.0 * std::sqrt(theta);
  double integral = integrate_adaptive(integrand, 0.0, radius, 0.1 * quad.rel_tol);
  while (tail_bound(radius) > quad.rel_tol * integral) {
    integral += integrate_adaptive(integrand, radius, 2.0 * radius, 0.1 * quad.rel_tol);
    radius *= 2.0;
  }
  return omega_n * integral;
}

BarenblattSpec solve_theta(double M, const ModelParams& params, const QuadratureSpec& quad) {
  return solve_theta_impl(
      M, params, [&](double theta) { return mass_of_theta(theta, params, quad); }, 1e-6, 1e6,
      1e-10);
}

BarenblattSpec solve_theta_on_grid(double M, const ModelParams& params, const GridPtr& grid,
                                   double theta_hint) {
  const auto grid_mass = [&](double theta) {
    const auto& centers = grid->centers();
    const auto& vols = grid->volumes();
    double acc = 0.0;
    for (size_t i = 0; i < centers.size(); ++i) {
      acc += rho_profile_value(theta, params, centers[i]) * vols[i];
    }
    return acc;
  };
  const double lo = theta_hint > 0.0 ? theta_hint * 0.5 : 1e-6;
  const double hi = theta_hint > 0.0 ? theta_hint * 2.0 : 1e6;
  // tighter than the whole-space solve: the grid mass is cheap to evaluate
  // and the D = E_rel identity inherits this residual through theta
  return solve_theta_impl(M, params, grid_mass, lo, hi, 1e-12);
}

double s_of_t(double t, double lambda) {
  if (!(t >= 0.0)) throw std::invalid_argument("s_of_t: t must be nonnegative");
  return std::log1p(lambda * t) / lambda;
}

double t_of_s(double s, double lambda) {
  if (!(s >= 0.0)) throw std::invalid_argument("t_of_s: s must be nonnegative");
  return std::expm1(lambda * s) / lambda;
}

double scale_factor(double t, double lambda) {
  return std::pow(1.0 + lambda * t, 1.0 / lambda);
}

RescaledField rescale_u_to_rho(const Field& u, double t, const ModelParams& params) {
  if (!(t >= 0.0)) throw std::invalid_argument("rescale_u_to_rho: t must be nonnegative");
  const DerivedConstants c = derive_constants(params);
  const double R = scale_factor(t, c.lambda);
  const double jac = std::pow(R, params.n);
  const RadialGrid& g = u.grid();
  GridPtr scaled = build_grid(g.dim(), g.r_max() / R, g.cells(), g.grading(), g.ratio());
  std::vector<double> v(u.values());
  for (double& x : v) x *= jac;
  return RescaledField{Field(std::move(scaled), std::move(v)), s_of_t(t, c.lambda)};
}

Field rescale_rho_to_u(const Field& rho, double t, const ModelParams& params) {
  if (!(t >= 0.0)) throw std::invalid_argument("rescale_rho_to_u: t must be nonnegative");
  const DerivedConstants c = derive_constants(params);
  const double R = scale_factor(t, c.lambda);
  const double jac = std::pow(R, params.n);
  const RadialGrid& g = rho.grid();
  GridPtr scaled = build_grid(g.dim(), g.r_max() * R, g.cells(), g.grading(), g.ratio());
  std::vector<double> v(rho.values());
  for (double& x : v) x /= jac;
  return Field(std::move(scaled), std::move(v));
}

}  // namespace fastdiff
