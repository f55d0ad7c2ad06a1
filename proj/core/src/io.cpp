#include "fastdiff/io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace fastdiff {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void write_field_csv(const std::string& path, const Field& field) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_field_csv: cannot open '" + path + "'");
  out << "# " << kCsvSchemaVersion << " field\n";
  out << "r_center,value\n";
  const auto& c = field.grid().centers();
  for (int i = 0; i < field.size(); ++i) {
    out << format_double(c[i]) << ',' << format_double(field[i]) << '\n';
  }

  const RadialGrid& g = field.grid();
  nlohmann::ordered_json header;
  header["n"] = g.dim();
  header["R_max"] = g.r_max();
  header["cells"] = g.cells();
  header["grading"] = g.grading_name();
  header["ratio"] = g.ratio();
  std::ofstream js(path + ".json");
  if (!js) throw std::runtime_error("write_field_csv: cannot open '" + path + ".json'");
  js << header.dump(2) << '\n';
}

Field read_field_csv(const std::string& path, const GridPtr& grid) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_field_csv: cannot open '" + path + "'");
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#' || line.rfind("r_center", 0) == 0) continue;
    const size_t comma = line.find(',');
    if (comma == std::string::npos) continue;
    values.push_back(std::strtod(line.c_str() + comma + 1, nullptr));
  }
  return Field(grid, std::move(values));
}

namespace {

const std::vector<std::string>& physical_columns() {
  static const std::vector<std::string> cols = {
      "t", "mass", "L1", "L2", "Linf", "second_moment", "tail_fraction"};
  return cols;
}

const std::vector<std::string>& rescaled_columns() {
  static const std::vector<std::string> cols = {
      "s",       "M",       "theta",        "L1_dist_to_profile",
      "E",       "E_rel",   "D_bregman",    "second_moment",
      "dissipation", "linf", "L2",          "lm_integral",
      "absorption_lp", "absorption_moment", "absorption_entropy_lm",
      "absorption_entropy_moment", "tail_fraction", "moment_rhs_integral",
      "dissipation_integral"};
  return cols;
}

double rescaled_value(const Trajectory& traj, size_t row, const std::string& col) {
  const Diagnostics& d = traj.snapshots[row].diag;
  if (col == "s") return d.time;
  if (col == "M") return d.M;
  if (col == "theta") return d.theta;
  if (col == "L1_dist_to_profile") return d.l1_dist_to_profile;
  if (col == "E") return d.entropy;
  if (col == "E_rel") return d.entropy_rel;
  if (col == "D_bregman") return d.bregman_div;
  if (col == "second_moment") return d.second_moment;
  if (col == "dissipation") return d.dissipation;
  if (col == "linf") return d.linf;
  if (col == "L2") return d.l2;
  if (col == "lm_integral") return d.lm_integral;
  if (col == "absorption_lp") return d.absorption_lp;
  if (col == "absorption_moment") return d.absorption_moment;
  if (col == "absorption_entropy_lm") return d.absorption_entropy_lm;
  if (col == "absorption_entropy_moment") return d.absorption_entropy_moment;
  if (col == "tail_fraction") return d.tail_fraction;
  if (col == "moment_rhs_integral") {
    return row == 0 || row - 1 >= traj.moment_rhs_integral.size() ? kNaN
                                                                  : traj.moment_rhs_integral[row - 1];
  }
  if (col == "dissipation_integral") {
    return row == 0 || row - 1 >= traj.dissipation_integral.size()
               ? kNaN
               : traj.dissipation_integral[row - 1];
  }
  return kNaN;
}

double physical_value(const Trajectory& traj, size_t row, const std::string& col) {
  const Diagnostics& d = traj.snapshots[row].diag;
  if (col == "t") return d.time;
  if (col == "mass") return d.mass;
  if (col == "L1") return d.l1;
  if (col == "L2") return d.l2;
  if (col == "Linf") return d.linf;
  if (col == "second_moment") return d.second_moment;
  if (col == "tail_fraction") return d.tail_fraction;
  return kNaN;
}

}  // namespace

void write_diagnostics_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_diagnostics_csv: cannot open '" + path + "'");
  const bool rescaled = traj.kind == Trajectory::Kind::rescaled;
  const auto& cols = rescaled ? rescaled_columns() : physical_columns();
  out << "# " << kCsvSchemaVersion << (rescaled ? " rescaled-diagnostics\n" : " physical-diagnostics\n");
  for (size_t c = 0; c < cols.size(); ++c) out << cols[c] << (c + 1 < cols.size() ? ',' : '\n');
  for (size_t row = 0; row < traj.snapshots.size(); ++row) {
    for (size_t c = 0; c < cols.size(); ++c) {
      const double v =
          rescaled ? rescaled_value(traj, row, cols[c]) : physical_value(traj, row, cols[c]);
      out << format_double(v) << (c + 1 < cols.size() ? ',' : '\n');
    }
  }
}

int DiagnosticsTable::column(const std::string& name) const {
  for (size_t i = 0; i < columns.size(); ++i) {
    if (columns[i] == name) return static_cast<int>(i);
  }
  return -1;
}

std::vector<double> DiagnosticsTable::series(const std::string& name) const {
  const int c = column(name);
  if (c < 0) throw std::runtime_error("diagnostics table: no column '" + name + "'");
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

DiagnosticsTable read_diagnostics_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_diagnostics_csv: cannot open '" + path + "'");
  DiagnosticsTable table;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string item;
    if (table.columns.empty()) {
      while (std::getline(ss, item, ',')) table.columns.push_back(item);
      continue;
    }
    std::vector<double> row;
    while (std::getline(ss, item, ',')) {
      // strtod handles nan/inf tokens and subnormal magnitudes without throwing
      row.push_back(std::strtod(item.c_str(), nullptr));
    }
    if (row.size() != table.columns.size()) {
      throw std::runtime_error("read_diagnostics_csv: ragged row in '" + path + "'");
    }
    table.rows.push_back(std::move(row));
  }
  return table;
}

}  // namespace fastdiff
