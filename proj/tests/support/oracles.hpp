#pragma once

// Test-side oracles, kept independent of the library implementation paths
// they check: closed forms of the stationary-profile integrals via the Beta
// function, plus a small recursive trapezoid-Romberg integrator.

#include <cmath>
#include <functional>
#include <numbers>

namespace oracles {

inline double unit_sphere_area(int n) {
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

/// int_0^inf r^{a} (r^2 + theta)^{-q} dr
///   = theta^{(a+1)/2 - q} Gamma((a+1)/2) Gamma(q - (a+1)/2) / (2 Gamma(q)),
/// valid for q > (a+1)/2 > 0.
inline double radial_power_integral(double a, double q, double theta) {
  const double half = 0.5 * (a + 1.0);
  return 0.5 * std::pow(theta, half - q) *
         std::exp(std::lgamma(half) + std::lgamma(q - half) - std::lgamma(q));
}

/// int_{R^n} rho_theta^k dx with rho_theta = (gamma/(r^2+theta))^{1/(1-m)}.
inline double profile_power_integral(int n, double m, double theta, double k) {
  const double gamma_c = 2.0 * m / (1.0 - m);
  const double q = k / (1.0 - m);
  return unit_sphere_area(n) * std::pow(gamma_c, q) *
         radial_power_integral(n - 1.0, q, theta);
}

/// int_{R^n} |y|^2 rho_theta dx.
inline double profile_second_moment(int n, double m, double theta) {
  const double gamma_c = 2.0 * m / (1.0 - m);
  const double q = 1.0 / (1.0 - m);
  return unit_sphere_area(n) * std::pow(gamma_c, q) *
         radial_power_integral(n + 1.0, q, theta);
}

/// Entropy of the stationary profile: (m-1)^{-1} int rho^m + 1/2 int |y|^2 rho.
inline double profile_entropy(int n, double m, double theta) {
  return profile_power_integral(n, m, theta, m) / (m - 1.0) +
         0.5 * profile_second_moment(n, m, theta);
}

/// Romberg integration on [a,b] (independent of the library's adaptive
/// Simpson): refines the trapezoid rule with Richardson extrapolation.
inline double romberg(const std::function<double(double)>& f, double a, double b,
                      int levels = 22, double rel_tol = 1e-13) {
  double table[40][40];
  double h = b - a;
  table[0][0] = 0.5 * h * (f(a) + f(b));
  long long pts = 1;
  for (int i = 1; i < levels; ++i) {
    h *= 0.5;
    double acc = 0.0;
    for (long long j = 0; j < pts; ++j) acc += f(a + (2 * j + 1) * h);
    table[i][0] = 0.5 * table[i - 1][0] + h * acc;
    double pow4 = 1.0;
    for (int k = 1; k <= i; ++k) {
      pow4 *= 4.0;
      table[i][k] = table[i][k - 1] + (table[i][k - 1] - table[i - 1][k - 1]) / (pow4 - 1.0);
    }
    if (i > 3 && std::abs(table[i][i] - table[i - 1][i - 1]) <=
                     rel_tol * std::abs(table[i][i]) + 1e-300) {
      return table[i][i];
    }
    pts *= 2;
  }
  return table[levels - 1][levels - 1];
}

}  // namespace oracles
