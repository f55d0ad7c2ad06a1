#include "fastdiff/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace fastdiff {

void ModelParams::validate() const {
  if (n < 2) {
    throw std::invalid_argument("ModelParams: n must be >= 2, got " + std::to_string(n));
  }
  if (!(m > 0.0 && m < 1.0)) {
    throw std::invalid_argument("ModelParams: m must lie in (0,1), got " + std::to_string(m));
  }
  if (!(p > 1.0)) {
    throw std::invalid_argument("ModelParams: p must be > 1, got " + std::to_string(p));
  }
  if (!(epsilon >= 0.0)) {
    throw std::invalid_argument("ModelParams: epsilon must be >= 0, got " + std::to_string(epsilon));
  }
}

DerivedConstants derive_constants(const ModelParams& params) {
  params.validate();
  const double n = static_cast<double>(params.n);
  DerivedConstants c{};
  c.lambda = 2.0 - n * (1.0 - params.m);
  c.delta = n * params.p - n * params.m - 2.0;
  c.gamma = 2.0 * params.m / (1.0 - params.m);
  c.alpha = c.gamma * c.lambda;
  c.sigma = n * (1.0 - params.m) / (2.0 * params.m);
  return c;
}

RegimeReport classify_regime(const ModelParams& params) {
  params.validate();
  const double n = static_cast<double>(params.n);
  const DerivedConstants c = derive_constants(params);
  RegimeReport r{};
  r.barenblatt_ok = params.m > (n - 2.0) / n;
  r.shannon_ok = params.m > n / (n + 2.0);
  r.convergence_ok = params.m > (n - 1.0) / n && params.p > params.m + 2.0 / n;
  r.diffusion_dominated = c.delta > 0.0;
  r.log_critical = std::abs(c.delta - 1.0) <= kLogCriticalTol;
  return r;
}

}  // namespace fastdiff
