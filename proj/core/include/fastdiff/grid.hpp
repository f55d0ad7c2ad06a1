#pragma once

#include <memory>
#include <string>
#include <vector>

namespace fastdiff {

enum class Grading { uniform, geometric };

/// Radial mesh for R^n with exact shell volumes.
///
/// Faces 0 = f_0 < f_1 < ... < f_K = r_max, cell centers at face midpoints,
/// cell volume w_i = omega_n (f_{i+1}^n - f_i^n)/n with omega_n the surface
/// area of the unit (n-1)-sphere. Immutable after construction.
class RadialGrid {
 public:
  RadialGrid(int n, double r_max, int cells, Grading grading, double ratio);

  int dim() const { return n_; }
  double r_max() const { return faces_.back(); }
  int cells() const { return static_cast<int>(centers_.size()); }
  Grading grading() const { return grading_; }
  double ratio() const { return ratio_; }

  const std::vector<double>& faces() const { return faces_; }
  const std::vector<double>& centers() const { return centers_; }
  const std::vector<double>& volumes() const { return volumes_; }

  /// omega_n f_k^{n-1}, the area of the sphere through face k.
  double face_area(int k) const;
  double unit_sphere_area() const { return omega_n_; }

  std::string grading_name() const;

 private:
  int n_;
  Grading grading_;
  double ratio_;
  double omega_n_;
  std::vector<double> faces_;
  std::vector<double> centers_;
  std::vector<double> volumes_;
};

using GridPtr = std::shared_ptr<const RadialGrid>;

/// Builds a radial grid; geometric grading concentrates cells near the
/// origin when ratio > 1 (cell widths grow outward by the given ratio).
GridPtr build_grid(int n, double r_max, int cells, Grading grading = Grading::uniform,
                   double ratio = 1.0);

/// Nonnegative radial density sampled at cell centers of a RadialGrid.
class Field {
 public:
  Field(GridPtr grid, std::vector<double> values);

  /// Zero field on the given grid.
  explicit Field(GridPtr grid);

  const RadialGrid& grid() const { return *grid_; }
  GridPtr grid_ptr() const { return grid_; }

  const std::vector<double>& values() const { return values_; }
  double operator[](int i) const { return values_[i]; }
  int size() const { return static_cast<int>(values_.size()); }

  /// Replaces the sample vector; enforces nonnegativity and size.
  void assign(std::vector<double> values);

 private:
  GridPtr grid_;
  std::vector<double> values_;
};

/// Total mass: sum of values * cell volumes.
double mass(const Field& field);

/// L^r norm; r = INFINITY returns the max cell value. Rejects r < 1.
double lr_norm(const Field& field, double r);

/// Second moment: sum of values * r_center^2 * cell volumes.
double second_moment(const Field& field);

/// L1 distance of two fields on the same grid.
double l1_distance(const Field& a, const Field& b);

/// Fraction of the field's mass in cells whose center lies beyond radius.
double tail_mass_fraction(const Field& field, double radius);

}  // namespace fastdiff
