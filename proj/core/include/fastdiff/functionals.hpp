#pragma once

#include <functional>

#include "fastdiff/grid.hpp"
#include "fastdiff/params.hpp"
#include "fastdiff/profiles.hpp"
#include "fastdiff/stepping.hpp"

namespace fastdiff {

/// Entropy-side diagnostics of a state against a mass-matched profile.
struct EntropyReport {
  double E;            ///< entropy of the state
  double E_rel;        ///< relative entropy E(f) - E(g)
  double D;            ///< Bregman divergence D(f|g)
  double dissipation;  ///< entropy production integral of the state
  double ck_constant;  ///< c_{m,g}
  double ck_margin;    ///< c sqrt(D) - ||f-g||_1, expected >= 0 for matched masses
};

/// Free energy E(rho) = (m-1)^{-1} int rho^m + 1/2 int |y|^2 rho.
/// Requires the m > n/(n+2) regime (the rho^m integral is controlled by mass
/// and second moment there).
double entropy(const Field& rho, const ModelParams& params);

/// Bregman divergence of the entropy density,
/// D(f|g) = (m-1)^{-1} [ int f^m - int g^m - m int g^{m-1}(f-g) ] >= 0.
/// The Field overload requires g strictly positive; the BarenblattSpec
/// overload evaluates g analytically at cell centers.
double bregman(const Field& f, const Field& g, const ModelParams& params);
double bregman(const Field& f, const BarenblattSpec& g, const ModelParams& params);

/// E(f|g) = E(f) - E(g).
double relative_entropy(const Field& f, const Field& g, const ModelParams& params);
double relative_entropy(const Field& f, const BarenblattSpec& g, const ModelParams& params);

/// c_{m,g} = M^{(m-2)/2} ( (2/m) int g^{2-m} )^{1/2}; requires mass(g) = M
/// within 1e-6 relative.
double ck_constant(const Field& g, const ModelParams& params, double M);
double ck_constant(const BarenblattSpec& g, const GridPtr& grid);

/// Returns c_{m,g} sqrt(D(f|g)) - ||f-g||_1; masses must match within 1e-6
/// relative. Expected nonnegative up to quadrature error.
double ck_check(const Field& f, const Field& g, const ModelParams& params);
double ck_check(const Field& f, const BarenblattSpec& g, const ModelParams& params);

/// Entropy production int rho |grad( m/(m-1) rho^{m-1} + |y|^2/2 )|^2.
/// Faces adjacent to cells below the density floor are evaluated through the
/// expanded form (m/(m-1/2))^2 |grad rho^{m-1/2}|^2 + 2 y.grad rho^m + |y|^2 rho,
/// which stays finite as rho -> 0 for m > 1/2.
double dissipation(const Field& rho, const ModelParams& params, double floor = 1e-30);

/// Right-hand side of the relative-entropy upper bound
/// E(f|rho_M) <= 1/2 int f | m/(m-1) grad f^{m-1} + y |^2; on a radial grid
/// this is exactly half the entropy production.
double relative_entropy_upper(const Field& rho, const ModelParams& params);

struct InequalitySides {
  double lhs;
  double rhs_core;  ///< right-hand side without the unknown constant C(n)
};

/// Moment interpolation: lhs = int f^m, rhs_core = ||f||_1^{m(1-sigma)} (int |y|^2 f)^{m sigma}.
InequalitySides shannon_sides(const Field& f, const ModelParams& params);

/// Nash: lhs = ||f||_2^{1+2/n}, rhs_core = ||f||_1^{2/n} ||grad f||_2.
InequalitySides nash_sides(const Field& f);

/// Margin of the elementary power inequality for positive a, b:
/// r > 1:  2^{r-1} r (a^{r-1} + b^{r-1}) |a-b| - |a^r - b^r|
/// 0<r<=1: |a-b|^r - |a^r - b^r|
/// Expected nonnegative.
double elementary_inequality(double a, double b, double r);

/// Radial cut-off: 1 on [0,R), exp(1 - R/(2R-|x|)) on [R,2R), 0 beyond.
double cutoff_eta(double x_norm, double R);

/// |d eta / dr|, analytic on the middle branch, zero elsewhere.
double cutoff_eta_grad(double x_norm, double R);

/// sup over sampled x in [R, 2R) of |grad eta| a^2 R eta^{a-1}; bounded by a
/// constant independent of R and a in (0,1).
double cutoff_bound_ratio(double R, double a, int sample_count);

/// Smooth radial test function with time dependence for the weak-form check.
struct TestFunction {
  std::function<double(double r, double t)> value;
  std::function<double(double r, double t)> ddr;
  std::function<double(double r, double t)> ddt;
  double support_radius = 0.0;  ///< 0 means no compact support information
};

/// Time-independent cut-off test function eta_R.
TestFunction cutoff_test_function(double R);

/// Absolute mismatch of the weak-solution integral identity evaluated over a
/// physical trajectory: grid quadrature in x, trapezoid in t over snapshots.
double weak_residual(const Trajectory& traj, const TestFunction& phi, const ModelParams& params);

/// Full report against a mass-matched profile (grid-measure matching).
EntropyReport entropy_report(const Field& rho, const BarenblattSpec& g, const ModelParams& params);

/// Fixed point I* of the second-moment comparison ODE I' = C_shannon I^{m sigma} - 2 I:
/// with the empirical Shannon ratio c_hat = sup int f^m / rhs_core along a run,
/// every trajectory moment stays below max(I(0), I*).
double moment_apriori_bound(double mass_value, double c_hat, const ModelParams& params);

}  // namespace fastdiff
