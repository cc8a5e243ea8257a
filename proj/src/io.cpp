#include "fvd/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "fvd/errors.hpp"

namespace fvd {

void TimeSeries::add_channel(const std::string& name) {
  names.push_back(name);
  data.emplace_back();
}

void TimeSeries::push(const std::vector<double>& row) {
  if (row.size() != names.size()) throw std::invalid_argument("row size does not match the channel count");
  if (!data.empty() && !data.front().empty() && !(row.front() > data.front().back()))
    throw std::invalid_argument("time series times must increase");
  for (std::size_t i = 0; i < row.size(); ++i) data[i].push_back(row[i]);
}

bool TimeSeries::has(const std::string& name) const {
  for (const auto& n : names)
    if (n == name) return true;
  return false;
}

const std::vector<double>& TimeSeries::column(const std::string& name) const {
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return data[i];
  throw std::invalid_argument("no channel named '" + name + "'");
}

void write_csv(const TimeSeries& s, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  for (std::size_t i = 0; i < s.names.size(); ++i) out << (i ? "," : "") << s.names[i];
  out << "\n";
  char buf[64];
  for (std::size_t r = 0; r < s.size(); ++r) {
    for (std::size_t c = 0; c < s.names.size(); ++c) {
      std::snprintf(buf, sizeof buf, "%.11e", s.data[c][r]);
      out << (c ? "," : "") << buf;
    }
    out << "\n";
  }
  if (!out) throw std::runtime_error("error writing " + path);
}

TimeSeries read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open " + path);
  TimeSeries s;
  std::string line;
  if (!std::getline(in, line)) throw ConfigError("empty CSV file " + path);
  {
    std::stringstream ss(line);
    for (std::string f; std::getline(ss, f, ',');) s.add_channel(f);
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::size_t c = 0;
    for (std::string f; std::getline(ss, f, ','); ++c) {
      if (c >= s.names.size()) throw ConfigError("CSV row longer than its header in " + path);
      try {
        s.data[c].push_back(std::stod(f));
      } catch (const std::exception&) {
        throw ConfigError("bad number '" + f + "' in " + path);
      }
    }
    if (c != s.names.size()) throw ConfigError("CSV row shorter than its header in " + path);
  }
  return s;
}

namespace {
int vtk_cell_type(ElementKind k) {
  switch (k) {
    case ElementKind::Bar2: return 3;
    case ElementKind::Tri3: return 5;
    case ElementKind::Quad4: return 9;
    case ElementKind::Quad8: return 23;
  }
  return 0;
}
}  // namespace

void write_vtk(const Mesh& mesh, const Eigen::VectorXd& u, const Eigen::VectorXd& phi,
               const std::vector<SymTensor2<double>>& cell_stress, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const int dim = mesh.dim;
  const std::size_t nn = mesh.num_nodes(), ne = mesh.num_elements();
  out << "# vtk DataFile Version 3.0\nfvd snapshot\nASCII\nDATASET UNSTRUCTURED_GRID\n";
  out.precision(12);
  out << std::scientific;
  out << "POINTS " << nn << " double\n";
  for (const auto& x : mesh.nodes) out << x[0] << " " << x[1] << " 0\n";
  std::size_t total = 0;
  for (const auto& e : mesh.elements) total += e.size() + 1;
  out << "CELLS " << ne << " " << total << "\n";
  for (const auto& e : mesh.elements) {
    out << e.size();
    for (int n : e) out << " " << n;
    out << "\n";
  }
  out << "CELL_TYPES " << ne << "\n";
  for (std::size_t i = 0; i < ne; ++i) out << vtk_cell_type(mesh.kind) << "\n";
  out << "POINT_DATA " << nn << "\nVECTORS u double\n";
  for (std::size_t i = 0; i < nn; ++i)
    out << u[dim * i] << " " << (dim == 2 ? u[dim * i + 1] : 0.0) << " 0\n";
  out << "SCALARS phi double 1\nLOOKUP_TABLE default\n";
  for (std::size_t i = 0; i < nn; ++i) out << phi[static_cast<Eigen::Index>(i)] << "\n";
  if (cell_stress.size() == ne) {
    out << "CELL_DATA " << ne << "\nSCALARS stress_trace double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : cell_stress) out << trace(s) << "\n";
    out << "SCALARS stress_von_mises double 1\nLOOKUP_TABLE default\n";
    for (const auto& s : cell_stress) {
      // in-plane components only
      const double vm = s.dim == 1 ? std::abs(s[0])
                                   : std::sqrt(s[0] * s[0] - s[0] * s[1] + s[1] * s[1] + 3.0 * s[2] * s[2]);
      out << vm << "\n";
    }
  }
  if (!out) throw std::runtime_error("error writing " + path);
}

std::string vtk_filename(const std::string& dir, const std::string& stem, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%06d.vtk", step);
  return dir + "/" + stem + buf;
}

}  // namespace fvd
