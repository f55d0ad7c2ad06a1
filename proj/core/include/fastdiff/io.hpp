#pragma once

#include <string>
#include <vector>

#include "fastdiff/grid.hpp"
#include "fastdiff/stepping.hpp"

namespace fastdiff {

/// Schema tag written as the first comment line of every CSV this project
/// emits.
inline constexpr const char* kCsvSchemaVersion = "fastdiff-csv v1";

/// Deterministic shortest round-trip formatting of a double.
std::string format_double(double v);

/// Field CSV (columns r_center,value) plus a JSON sidecar <path>.json with
/// the grid header {n, R_max, cells, grading, ratio}.
void write_field_csv(const std::string& path, const Field& field);

/// Reads a field CSV back onto the given grid (cell count must match).
Field read_field_csv(const std::string& path, const GridPtr& grid);

/// Trajectory diagnostics CSV. Physical layout:
///   t,mass,L1,L2,Linf,second_moment,...
/// Rescaled layout:
///   s,M,theta,L1_dist_to_profile,E,E_rel,D_bregman,second_moment,dissipation,linf,...
/// with auxiliary columns appended after the required set.
void write_diagnostics_csv(const std::string& path, const Trajectory& traj);

struct DiagnosticsTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;

  int column(const std::string& name) const;  ///< -1 when absent
  std::vector<double> series(const std::string& name) const;
};

DiagnosticsTable read_diagnostics_csv(const std::string& path);

}  // namespace fastdiff
