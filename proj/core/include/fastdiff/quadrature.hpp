#pragma once

#include <functional>

namespace fastdiff {

/// Adaptive Simpson quadrature of f on [a, b].
///
/// Subdivides until the local Richardson error estimate is below
/// rel_tol * |whole-interval estimate| + abs_tol, up to max_depth levels.
double integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                          double rel_tol = 1e-12, double abs_tol = 0.0, int max_depth = 48);

}  // namespace fastdiff
