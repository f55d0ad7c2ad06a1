#include "fastdiff/grid.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace fastdiff {

namespace {

double unit_sphere_area_of(int n) {
  // omega_n = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

}  // namespace

RadialGrid::RadialGrid(int n, double r_max, int cells, Grading grading, double ratio)
    : n_(n), grading_(grading), ratio_(ratio) {
  if (n < 2) throw std::invalid_argument("RadialGrid: n must be >= 2");
  if (!(r_max > 0.0)) throw std::invalid_argument("RadialGrid: r_max must be positive");
  if (cells < 1) throw std::invalid_argument("RadialGrid: need at least one cell");
  if (grading == Grading::geometric && !(ratio > 0.0)) {
    throw std::invalid_argument("RadialGrid: geometric ratio must be positive");
  }

  omega_n_ = unit_sphere_area_of(n);
  faces_.resize(cells + 1);
  faces_[0] = 0.0;
  if (grading == Grading::uniform || ratio == 1.0) {
    for (int k = 1; k <= cells; ++k) faces_[k] = r_max * static_cast<double>(k) / cells;
  } else {
    // widths w_0 * ratio^i, scaled so they sum to r_max
    const double w0 = r_max * (ratio - 1.0) / (std::pow(ratio, cells) - 1.0);
    double w = w0;
    for (int k = 1; k <= cells; ++k) {
      faces_[k] = faces_[k - 1] + w;
      w *= ratio;
    }
  }
  faces_.back() = r_max;  // kill accumulation roundoff at the outer face

  centers_.resize(cells);
  volumes_.resize(cells);
  for (int i = 0; i < cells; ++i) {
    if (!(faces_[i + 1] > faces_[i])) {
      throw std::invalid_argument("RadialGrid: degenerate cell (faces not strictly increasing)");
    }
    centers_[i] = 0.5 * (faces_[i] + faces_[i + 1]);
    volumes_[i] = omega_n_ * (std::pow(faces_[i + 1], n) - std::pow(faces_[i], n)) / n;
  }
}

double RadialGrid::face_area(int k) const {
  return omega_n_ * std::pow(faces_[k], n_ - 1);
}

std::string RadialGrid::grading_name() const {
  return grading_ == Grading::uniform ? "uniform" : "geometric";
}

GridPtr build_grid(int n, double r_max, int cells, Grading grading, double ratio) {
  return std::make_shared<const RadialGrid>(n, r_max, cells, grading, ratio);
}

Field::Field(GridPtr grid, std::vector<double> values) : grid_(std::move(grid)) {
  assign(std::move(values));
}

Field::Field(GridPtr grid)
    : grid_(std::move(grid)), values_(grid_->cells(), 0.0) {}

void Field::assign(std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid_->cells()) {
    throw std::invalid_argument("Field: value count does not match grid cell count");
  }
  for (double v : values) {
    if (!(v >= 0.0)) throw std::invalid_argument("Field: values must be nonnegative and finite");
  }
  values_ = std::move(values);
}

double mass(const Field& field) {
  const auto& w = field.grid().volumes();
  const auto& v = field.values();
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += v[i] * w[i];
  return acc;
}

double lr_norm(const Field& field, double r) {
  if (!(r >= 1.0)) throw std::invalid_argument("lr_norm: r must be >= 1");
  const auto& v = field.values();
  if (std::isinf(r)) {
    double mx = 0.0;
    for (double x : v) mx = std::max(mx, x);
    return mx;
  }
  const auto& w = field.grid().volumes();
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += std::pow(v[i], r) * w[i];
  return std::pow(acc, 1.0 / r);
}

double second_moment(const Field& field) {
  const auto& w = field.grid().volumes();
  const auto& c = field.grid().centers();
  const auto& v = field.values();
  double acc = 0.0;
  for (size_t i = 0; i < v.size(); ++i) acc += v[i] * c[i] * c[i] * w[i];
  return acc;
}

double l1_distance(const Field& a, const Field& b) {
  if (&a.grid() != &b.grid() && a.grid().faces() != b.grid().faces()) {
    throw std::invalid_argument("l1_distance: fields live on different grids");
  }
  const auto& w = a.grid().volumes();
  double acc = 0.0;
  for (int i = 0; i < a.size(); ++i) acc += std::abs(a[i] - b[i]) * w[i];
  return acc;
}

double tail_mass_fraction(const Field& field, double radius) {
  const auto& w = field.grid().volumes();
  const auto& c = field.grid().centers();
  const auto& v = field.values();
  double total = 0.0, tail = 0.0;
  for (size_t i = 0; i < v.size(); ++i) {
    const double dm = v[i] * w[i];
    total += dm;
    if (c[i] > radius) tail += dm;
  }
  return total > 0.0 ? tail / total : 0.0;
}

}  // namespace fastdiff
