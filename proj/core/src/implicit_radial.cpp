#include "implicit_radial.hpp"

#include <algorithm>
#include <cmath>

namespace fastdiff::detail {

namespace {

constexpr double kJacobianFloor = 1e-300;  // keeps m u^{m-1} finite at vacuum cells

inline double potential(double u, double m, double eps) {
  return std::pow(u, m) + eps * u;
}

inline double potential_slope(double u, double m, double eps) {
  return m * std::pow(std::max(u, kJacobianFloor), m - 1.0) + eps;
}

}  // namespace

StepAttempt implicit_step(const GridPtr& grid_ptr, const std::vector<double>& old_values, double dt,
                          const ImplicitCoeffs& c, const StepControl& ctrl) {
  const RadialGrid& grid = *grid_ptr;
  const int K = grid.cells();
  const auto& vols = grid.volumes();
  const auto& centers = grid.centers();
  const auto& faces = grid.faces();

  // Per-interior-face geometry and drift weights (frozen from the old state).
  std::vector<double> area(K + 1, 0.0), hface(K + 1, 0.0), wout(K + 1, 0.0);
  for (int k = 1; k < K; ++k) {
    area[k] = grid.face_area(k);
    hface[k] = centers[k] - centers[k - 1];
    if (c.drift) {
      const double ubar = std::max(0.5 * (old_values[k - 1] + old_values[k]), kJacobianFloor);
      const double cond = c.m * std::pow(ubar, c.m - 1.0) + c.eps;
      const double peclet = faces[k] * hface[k] / cond;
      wout[k] = peclet <= c.peclet_threshold ? 0.5 : 1.0;
    }
  }

  std::vector<double> u(old_values);
  std::vector<double> phi(K), slope(K), res(K);
  std::vector<double> lower(K), diag(K), upper(K), delta(K);

  StepAttempt attempt;
  for (int iter = 0; iter <= ctrl.newton_max_iter; ++iter) {
    for (int i = 0; i < K; ++i) phi[i] = potential(u[i], c.m, c.eps);

    double res_l1 = 0.0;
    for (int i = 0; i < K; ++i) {
      double div = 0.0;
      if (i + 1 < K) {
        const int k = i + 1;
        double flux = (phi[i + 1] - phi[i]) / hface[k];
        if (c.drift) flux += faces[k] * (wout[k] * u[i + 1] + (1.0 - wout[k]) * u[i]);
        div += area[k] * flux;
      }
      if (i > 0) {
        const int k = i;
        double flux = (phi[i] - phi[i - 1]) / hface[k];
        if (c.drift) flux += faces[k] * (wout[k] * u[i] + (1.0 - wout[k]) * u[i - 1]);
        div -= area[k] * flux;
      }
      double r = vols[i] * (u[i] - old_values[i]) - dt * div;
      if (c.sink != 0.0) r += dt * vols[i] * c.sink * std::pow(u[i], c.p);
      res[i] = r;
      res_l1 += std::abs(r);
    }

    attempt.iterations = iter;
    attempt.residual_l1 = res_l1;
    if (res_l1 <= ctrl.newton_tol) {
      for (double& x : u) {
        if (x == 0.0) x = 0.0;  // normalize -0.0
      }
      attempt.next = Field(grid_ptr, std::move(u));
      return attempt;
    }
    if (iter == ctrl.newton_max_iter) break;

    for (int i = 0; i < K; ++i) slope[i] = potential_slope(u[i], c.m, c.eps);
    for (int i = 0; i < K; ++i) {
      double d = vols[i];
      double lo = 0.0, up = 0.0;
      if (i + 1 < K) {
        const int k = i + 1;
        d += dt * area[k] * slope[i] / hface[k];
        up = -dt * area[k] * slope[i + 1] / hface[k];
        if (c.drift) {
          d -= dt * area[k] * faces[k] * (1.0 - wout[k]);
          up -= dt * area[k] * faces[k] * wout[k];
        }
      }
      if (i > 0) {
        const int k = i;
        d += dt * area[k] * slope[i] / hface[k];
        lo = -dt * area[k] * slope[i - 1] / hface[k];
        if (c.drift) {
          d += dt * area[k] * faces[k] * wout[k];
          lo += dt * area[k] * faces[k] * (1.0 - wout[k]);
        }
      }
      if (c.sink != 0.0) d += dt * vols[i] * c.sink * c.p * std::pow(std::max(u[i], kJacobianFloor), c.p - 1.0);
      lower[i] = lo;
      diag[i] = d;
      upper[i] = up;
    }

    // Thomas solve of J delta = -res (diagonally dominant, no pivoting)
    bool singular = false;
    {
      std::vector<double>& cw = phi;  // reuse as scratch for modified upper coefficients
      double beta = diag[0];
      if (beta == 0.0 || !std::isfinite(beta)) {
        singular = true;
      } else {
        delta[0] = -res[0] / beta;
        for (int i = 1; i < K; ++i) {
          cw[i - 1] = upper[i - 1] / beta;
          beta = diag[i] - lower[i] * cw[i - 1];
          if (beta == 0.0 || !std::isfinite(beta)) {
            singular = true;
            break;
          }
          delta[i] = (-res[i] - lower[i] * delta[i - 1]) / beta;
        }
        if (!singular) {
          for (int i = K - 2; i >= 0; --i) delta[i] -= cw[i] * delta[i + 1];
        }
      }
    }
    if (singular) break;

    // damp to keep the iterate nonnegative
    double alpha = 1.0;
    for (int i = 0; i < K; ++i) {
      if (delta[i] < 0.0 && u[i] + delta[i] < 0.0) {
        alpha = std::min(alpha, 0.9 * u[i] / (-delta[i]));
      }
    }
    if (!(alpha > 1e-14)) break;
    for (int i = 0; i < K; ++i) u[i] = std::max(u[i] + alpha * delta[i], 0.0);
  }

  attempt.next.reset();
  return attempt;
}

}  // namespace fastdiff::detail
