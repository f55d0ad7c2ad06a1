#pragma once

#include "fastdiff/grid.hpp"
#include "fastdiff/params.hpp"

namespace fastdiff {

/// A mass-matched stationary profile: target mass M plus the matched
/// parameter theta (rescaled frame) and beta (physical frame).
/// Invariant: beta = theta * lambda^{2/lambda}.
struct BarenblattSpec {
  ModelParams params;
  double M = 0.0;
  double theta = 0.0;
  double beta = 0.0;
  double mass_residual = 0.0;  ///< |M(theta) - M| / M at the solved theta
};

/// Pointwise stationary profile rho_theta(r) = (gamma / (r^2 + theta))^{1/(1-m)}.
double rho_profile_value(double theta, const ModelParams& params, double r);

/// Pointwise self-similar solution U(r, t) = (alpha t / (r^2 + beta t^{2/lambda}))^{1/(1-m)}.
double u_profile_value(double beta, const ModelParams& params, double t, double r);

/// Stationary profile sampled at cell centers. Requires theta > 0 and the
/// integrable regime m > (n-2)/n.
Field rho_profile(double theta, const ModelParams& params, const GridPtr& grid);

/// Self-similar solution at time t > 0 sampled at cell centers.
Field u_profile(double beta, const ModelParams& params, double t, const GridPtr& grid);

struct QuadratureSpec {
  double rel_tol = 1e-12;  ///< target relative accuracy of the profile mass
};

/// Mass of rho_theta over all of R^n: adaptive quadrature on [0, R_q] plus a
/// closed-form bound for the power-law tail, with R_q grown until the tail
/// bound is below rel_tol times the running estimate. Strictly decreasing in
/// theta. Rejects non-integrable regimes (m <= (n-2)/n).
double mass_of_theta(double theta, const ModelParams& params, const QuadratureSpec& quad = {});

/// Solves ||rho_theta||_1 = M by bisection in log(theta) with bracket
/// auto-expansion from [1e-6, 1e6]; the result satisfies
/// |mass_of_theta(theta) - M| / M <= 1e-10.
BarenblattSpec solve_theta(double M, const ModelParams& params, const QuadratureSpec& quad = {});

/// Same mass matching but against the grid quadrature sum of the sampled
/// profile instead of the whole-space integral. Used to mass-match snapshot
/// diagnostics, where all functionals live on the grid measure; the
/// whole-space and grid values of theta differ by the truncated tail mass.
/// theta_hint, when positive, centers the initial bracket.
BarenblattSpec solve_theta_on_grid(double M, const ModelParams& params, const GridPtr& grid,
                                   double theta_hint = 0.0);

/// Rescaled time map s = log(1 + lambda t) / lambda and its inverse.
double s_of_t(double t, double lambda);
double t_of_s(double s, double lambda);

/// Similarity scale R(t) = (1 + lambda t)^{1/lambda}.
double scale_factor(double t, double lambda);

struct RescaledField {
  Field rho;
  double s;
};

/// Change of variables x = y R(t), rho = R(t)^n u: returns rho on the grid
/// with all radii divided by R(t), plus the rescaled time s(t). Mass is
/// preserved exactly (the Jacobian cancels).
RescaledField rescale_u_to_rho(const Field& u, double t, const ModelParams& params);

/// Inverse transform: u on the grid with radii multiplied by R(t).
Field rescale_rho_to_u(const Field& rho, double t, const ModelParams& params);

}  // namespace fastdiff
