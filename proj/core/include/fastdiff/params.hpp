#pragma once

namespace fastdiff {

/// Exponents and regularization for the absorbing fast diffusion model
/// u_t = div(grad(u^m + epsilon*u)) - u^p on R^n, restricted here to
/// radially symmetric densities.
struct ModelParams {
  int n = 2;                      ///< spatial dimension, n >= 2
  double m = 0.75;                ///< diffusion exponent, 0 < m < 1
  double p = 2.0;                 ///< absorption exponent, p > 1
  double epsilon = 1e-8;          ///< linear regularization strength, >= 0
  bool absorption_enabled = true; ///< include the -u^p sink

  /// Throws std::invalid_argument when any invariant is violated.
  void validate() const;
};

/// Constants derived from (n, m, p). All dimensionless.
///
/// lambda = 2 - n(1-m)        similarity exponent
/// delta  = np - nm - 2       absorption-vs-diffusion balance
/// gamma  = 2m/(1-m)          stationary profile coefficient
/// alpha  = gamma * lambda    self-similar profile coefficient
/// sigma  = n(1-m)/(2m)       moment interpolation exponent
struct DerivedConstants {
  double lambda;
  double delta;
  double gamma;
  double alpha;
  double sigma;
};

/// Which of the analytical hypotheses the parameter point satisfies.
struct RegimeReport {
  bool barenblatt_ok;       ///< m > (n-2)/n: stationary profile integrable
  bool shannon_ok;          ///< m > n/(n+2): moment interpolation applies
  bool convergence_ok;      ///< m > (n-1)/n and p > m + 2/n
  bool diffusion_dominated; ///< delta > 0
  bool log_critical;        ///< |delta - 1| <= 1e-12
};

/// Absolute tolerance for detecting the logarithmic critical case delta = 1.
/// delta comes from three exact inputs, so anything beyond rounding noise is
/// a genuinely non-critical point.
inline constexpr double kLogCriticalTol = 1e-12;

DerivedConstants derive_constants(const ModelParams& params);
RegimeReport classify_regime(const ModelParams& params);

}  // namespace fastdiff
