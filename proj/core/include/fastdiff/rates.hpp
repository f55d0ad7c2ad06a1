#pragma once

#include <limits>
#include <optional>
#include <vector>

#include "fastdiff/params.hpp"

namespace fastdiff {

enum class RateModel { power_in_one_plus_lambda_t, exponential_in_s, exp_with_log_factor };

struct RateFit {
  RateModel model;
  double slope = 0.0;
  double intercept = 0.0;
  double window_start = 0.0;
  double window_end = 0.0;
  double rms_residual = 0.0;
  int points = 0;
};

/// A (time, value) sample of a trajectory diagnostic.
struct Sample {
  double t;
  double v;
};

struct FitWindow {
  double start;
  double end;
};

/// Default asymptotic window: last half of the series in its natural time
/// variable, excluding the final 5%.
FitWindow default_window(const std::vector<Sample>& series);

/// Same rule applied in the power fit's natural variable ln(1 + lambda t),
/// mapped back to t.
FitWindow default_power_window(const std::vector<Sample>& series, double lambda);

/// Exponents predicted by the decay and convergence theorems for the L^r norm.
struct TheoremRates {
  double decay_exponent_thm13;                       ///< (r-1)/(r(p-1))
  std::optional<double> decay_exponent_thm13_strong; ///< max{...} branch, only for r >= 3-m
  double convergence_exponent_thm14;                 ///< (n(r-1) + min{1,delta})/(lambda r)
  bool log_flag;                                     ///< delta = 1 within tolerance
};

/// r may be infinite (limits of the formulas).
TheoremRates theorem_rates(const ModelParams& params, double r);

/// Least squares of ln v against ln(1 + lambda t) over the window.
/// Requires positive values and at least 8 points in the window.
RateFit fit_power(const std::vector<Sample>& series, double lambda, const FitWindow& window);

/// Least squares of ln v against s over the window, subtracting
/// log_power * ln(1+s) first. log_power 2 matches the critical-case bound
/// C (1+s)^2 e^{-2s} of the relative entropy; log_power 1 matches the
/// corresponding C (1+s) e^{-s} bound of the L1 distance.
RateFit fit_exponential(const std::vector<Sample>& series, const FitWindow& window,
                        int log_power = 0);

struct GronwallReport {
  double C_min = 0.0;  ///< smallest constant making the integrated inequality hold everywhere
  int violations = 0;  ///< intervals whose required constant is non-finite or above the cap
  int restarts = 0;    ///< snapshots where E hit zero (inequality restart convention)
};

/// Checks the integrated differential inequality
///   d/ds ( e^s sqrt(E) ) <= C e^{(1-delta) s}
/// over every consecutive snapshot interval of a nonnegative series E(s):
/// required-C per interval is [Delta(e^s sqrt(E))]_+ / int e^{(1-delta)s} ds,
/// and C_min is the largest of these. Negative E values are rejected.
GronwallReport gronwall_check(const std::vector<Sample>& entropy_series, double delta,
                              double c_cap = std::numeric_limits<double>::infinity());

}  // namespace fastdiff
