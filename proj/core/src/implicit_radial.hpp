#pragma once

// Internal backward-Euler Newton engine shared by the physical and rescaled
// solvers. Not installed.

#include <vector>

#include "fastdiff/grid.hpp"
#include "fastdiff/stepping.hpp"

namespace fastdiff::detail {

/// Coefficients of one implicit step of
///   V_i (u'_i - u_i) = dt [ A_{k+1} F_{k+1} - A_k F_k ] - dt V_i sink u'^p
/// with face flux F_k = drift_on * f_k * u_face + (phi_R - phi_L)/h_k and
/// potential phi = u^m + eps u. The drift face value blends the outer-cell
/// (upstream of the inward transport) and arithmetic-mean values: mean when
/// the face Peclet number of the old state is below peclet_threshold, outer
/// cell beyond it (keeps the Jacobian an M-matrix when drift dominates).
struct ImplicitCoeffs {
  double m = 0.75;
  double p = 2.0;
  double eps = 0.0;
  double sink = 0.0;  ///< coefficient of u'^p; 0 disables absorption
  bool drift = false;
  double peclet_threshold = 1.9;
};

StepAttempt implicit_step(const GridPtr& grid, const std::vector<double>& old_values, double dt,
                          const ImplicitCoeffs& coeffs, const StepControl& ctrl);

}  // namespace fastdiff::detail
