#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "chdg/diagnostics.hpp"
#include "chdg/dg_space.hpp"
#include "chdg/interface.hpp"
#include "chdg/time_stepper.hpp"

namespace chdg {

/// All writers are atomic: content goes to a temp file in the target
/// directory and is renamed into place.

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeriesRecord& series);

/// One file per dump: header `# chdg-field v1, n=<n>, r=<r>, field=<U|W>,
/// t=<time>`, then `cell_index,c0,c1,...` per cell, 17 significant digits.
void write_field_dump(const std::filesystem::path& path, const DGField& field,
                      const std::string& name, double time);

struct FieldDump {
  int n = 0;
  int degree = 0;
  std::string name;
  double time = 0.0;
  Eigen::VectorXd coeffs;
};

FieldDump read_field_dump(const std::filesystem::path& path);

/// Interface CSV: `time,segment,x0,y0,x1,y1`, optionally with a trailing
/// `distance` column when a reference distance was computed.
void write_interface_csv(const std::filesystem::path& path, const InterfacePolyline& poly);

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report);

void write_spectrum_csv(const std::filesystem::path& path,
                        const std::vector<std::array<double, 3>>& rows);  // n, epsilon, lambda

}  // namespace chdg
