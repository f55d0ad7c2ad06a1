#include "fastdiff/rates.hpp"

#include <cmath>
#include <stdexcept>

namespace fastdiff {

namespace {

RateFit least_squares(const std::vector<double>& x, const std::vector<double>& y, RateModel model,
                      const FitWindow& window) {
  const size_t n = x.size();
  if (n < 8) throw std::invalid_argument("rate fit: need at least 8 points in the window");
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < n; ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double det = n * sxx - sx * sx;
  if (det == 0.0) throw std::invalid_argument("rate fit: degenerate abscissae");
  RateFit fit;
  fit.model = model;
  fit.slope = (n * sxy - sx * sy) / det;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss = 0.0;
  for (size_t i = 0; i < n; ++i) {
    const double r = y[i] - (fit.intercept + fit.slope * x[i]);
    ss += r * r;
  }
  fit.rms_residual = std::sqrt(ss / n);
  fit.window_start = window.start;
  fit.window_end = window.end;
  fit.points = static_cast<int>(n);
  return fit;
}

}  // namespace

FitWindow default_window(const std::vector<Sample>& series) {
  if (series.empty()) throw std::invalid_argument("default_window: empty series");
  const double lo = series.front().t;
  const double hi = series.back().t;
  return {lo + 0.5 * (hi - lo), hi - 0.05 * (hi - lo)};
}

FitWindow default_power_window(const std::vector<Sample>& series, double lambda) {
  if (series.empty()) throw std::invalid_argument("default_power_window: empty series");
  const double xlo = std::log1p(lambda * series.front().t);
  const double xhi = std::log1p(lambda * series.back().t);
  const double a = xlo + 0.5 * (xhi - xlo);
  const double b = xhi - 0.05 * (xhi - xlo);
  return {std::expm1(a) / lambda, std::expm1(b) / lambda};
}

TheoremRates theorem_rates(const ModelParams& params, double r) {
  params.validate();
  if (!(r >= 1.0)) throw std::invalid_argument("theorem_rates: r must be >= 1 (or infinity)");
  const DerivedConstants c = derive_constants(params);
  const double n = static_cast<double>(params.n);
  TheoremRates out{};
  const bool rinf = std::isinf(r);
  const double frac = rinf ? 1.0 : (r - 1.0) / r;  // (r-1)/r -> 1 as r -> inf
  out.decay_exponent_thm13 = frac / (params.p - 1.0);
  if (rinf || r >= 3.0 - params.m) {
    out.decay_exponent_thm13_strong =
        std::max(out.decay_exponent_thm13, n * frac / (2.0 * (2.0 - params.m)));
  }
  const double mind = std::min(1.0, c.delta);
  out.convergence_exponent_thm14 = rinf ? n / c.lambda : (n * (r - 1.0) + mind) / (c.lambda * r);
  out.log_flag = std::abs(c.delta - 1.0) <= kLogCriticalTol;
  return out;
}

RateFit fit_power(const std::vector<Sample>& series, double lambda, const FitWindow& window) {
  std::vector<double> x, y;
  for (const Sample& s : series) {
    if (s.t < window.start || s.t > window.end) continue;
    if (!(s.v > 0.0)) throw std::invalid_argument("fit_power: values must be positive");
    x.push_back(std::log1p(lambda * s.t));
    y.push_back(std::log(s.v));
  }
  return least_squares(x, y, RateModel::power_in_one_plus_lambda_t, window);
}

RateFit fit_exponential(const std::vector<Sample>& series, const FitWindow& window,
                        int log_power) {
  std::vector<double> x, y;
  for (const Sample& s : series) {
    if (s.t < window.start || s.t > window.end) continue;
    if (!(s.v > 0.0)) throw std::invalid_argument("fit_exponential: values must be positive");
    x.push_back(s.t);
    y.push_back(std::log(s.v) - log_power * std::log1p(s.t));
  }
  return least_squares(
      x, y, log_power > 0 ? RateModel::exp_with_log_factor : RateModel::exponential_in_s, window);
}

GronwallReport gronwall_check(const std::vector<Sample>& entropy_series, double delta,
                              double c_cap) {
  GronwallReport report;
  if (entropy_series.size() < 2) {
    throw std::invalid_argument("gronwall_check: need at least two samples");
  }
  for (const Sample& s : entropy_series) {
    if (s.v < 0.0) throw std::invalid_argument("gronwall_check: negative entropy value");
  }
  const auto weight = [delta](double s0, double s1) {
    // int_{s0}^{s1} e^{(1-delta) s} ds
    if (std::abs(1.0 - delta) < 1e-14) return s1 - s0;
    return (std::exp((1.0 - delta) * s1) - std::exp((1.0 - delta) * s0)) / (1.0 - delta);
  };
  for (size_t k = 0; k + 1 < entropy_series.size(); ++k) {
    const auto& a = entropy_series[k];
    const auto& b = entropy_series[k + 1];
    if (!(b.t > a.t)) throw std::invalid_argument("gronwall_check: times must increase");
    if (a.v == 0.0) ++report.restarts;
    const double growth =
        std::exp(b.t) * std::sqrt(b.v) - std::exp(a.t) * std::sqrt(a.v);
    if (growth <= 0.0) continue;
    const double required = growth / weight(a.t, b.t);
    if (!std::isfinite(required) || required > c_cap) {
      ++report.violations;
    }
    if (std::isfinite(required)) report.C_min = std::max(report.C_min, required);
  }
  return report;
}

}  // namespace fastdiff
