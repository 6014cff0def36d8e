#include "chdg/io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace chdg {

namespace {

void write_atomic(const std::filesystem::path& path, const std::string& content) {
  namespace fs = std::filesystem;
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open " + tmp.string() + " for writing");
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  fs::rename(tmp, path);
}

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

void write_timeseries_csv(const std::filesystem::path& path, const TimeSeriesRecord& series) {
  std::ostringstream os;
  os << "step,time,energy,mass,newton_iters,residual,energy_law_residual\n";
  for (const auto& row : series.rows) {
    os << row.step << ',' << fmt(row.time) << ',' << fmt(row.energy) << ',' << fmt(row.mass)
       << ',' << row.newton_iters << ',' << fmt(row.residual) << ','
       << fmt(row.energy_law_residual) << '\n';
  }
  write_atomic(path, os.str());
}

void write_field_dump(const std::filesystem::path& path, const DGField& field,
                      const std::string& name, double time) {
  const DGSpace& space = *field.space;
  std::ostringstream os;
  os << "# chdg-field v1, n=" << space.mesh().n << ", r=" << space.degree() << ", field=" << name
     << ", t=" << fmt(time) << '\n';
  for (int c = 0; c < space.num_cells(); ++c) {
    os << c;
    for (int l = 0; l < space.local_dim(); ++l)
      os << ',' << fmt(field.coeffs(space.global_dof(c, l)));
    os << '\n';
  }
  write_atomic(path, os.str());
}

FieldDump read_field_dump(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field dump " + path.string());
  std::string header;
  std::getline(in, header);

  FieldDump dump;
  auto grab = [&](const std::string& key) -> std::string {
    const auto pos = header.find(key + "=");
    if (pos == std::string::npos)
      throw std::runtime_error("malformed field dump header: missing " + key);
    auto end = header.find_first_of(", ", pos + key.size() + 1);
    if (end == std::string::npos) end = header.size();
    return header.substr(pos + key.size() + 1, end - pos - key.size() - 1);
  };
  if (header.rfind("# chdg-field v1", 0) != 0)
    throw std::runtime_error("not a chdg-field v1 dump: " + path.string());
  dump.n = std::stoi(grab("n"));
  dump.degree = std::stoi(grab("r"));
  dump.name = grab("field");
  dump.time = std::stod(grab("t"));

  const int ldim = (dump.degree + 1) * (dump.degree + 2) / 2;
  const int ncells = 2 * dump.n * dump.n;
  dump.coeffs.resize(static_cast<Eigen::Index>(ncells) * ldim);

  std::string line;
  int seen = 0;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string tok;
    std::getline(ls, tok, ',');
    const int cell = std::stoi(tok);
    if (cell < 0 || cell >= ncells) throw std::runtime_error("field dump cell index out of range");
    for (int l = 0; l < ldim; ++l) {
      if (!std::getline(ls, tok, ','))
        throw std::runtime_error("field dump row too short at cell " + std::to_string(cell));
      dump.coeffs(static_cast<Eigen::Index>(cell) * ldim + l) = std::stod(tok);
    }
    ++seen;
  }
  if (seen != ncells) throw std::runtime_error("field dump has wrong cell count");
  return dump;
}

void write_interface_csv(const std::filesystem::path& path, const InterfacePolyline& poly) {
  std::ostringstream os;
  os << "time,segment,x0,y0,x1,y1\n";
  for (std::size_t i = 0; i < poly.segments.size(); ++i) {
    const auto& s = poly.segments[i];
    os << fmt(poly.time) << ',' << i << ',' << fmt(s.a[0]) << ',' << fmt(s.a[1]) << ','
       << fmt(s.b[0]) << ',' << fmt(s.b[1]) << '\n';
  }
  write_atomic(path, os.str());
}

void write_convergence_csv(const std::filesystem::path& path, const ConvergenceReport& report) {
  std::ostringstream os;
  os << "n,h,err_linf_l2,order_l2,err_l2_h1,order_h1\n";
  for (const auto& row : report.rows) {
    os << row.n << ',' << fmt(row.h) << ',' << fmt(row.err_linf_l2) << ',';
    if (std::isnan(row.order_l2))
      os << "";
    else
      os << fmt(row.order_l2);
    os << ',' << fmt(row.err_l2_h1) << ',';
    if (std::isnan(row.order_h1))
      os << "";
    else
      os << fmt(row.order_h1);
    os << '\n';
  }
  write_atomic(path, os.str());
}

void write_spectrum_csv(const std::filesystem::path& path,
                        const std::vector<std::array<double, 3>>& rows) {
  std::ostringstream os;
  os << "n,epsilon,lambda_min\n";
  for (const auto& row : rows)
    os << static_cast<int>(row[0]) << ',' << fmt(row[1]) << ',' << fmt(row[2]) << '\n';
  write_atomic(path, os.str());
}

}  // namespace chdg
