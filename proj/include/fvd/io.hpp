#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "fvd/mesh.hpp"
#include "fvd/tensors.hpp"

namespace fvd {

// Named channels of equal length; the first channel is "time".
struct TimeSeries {
  std::vector<std::string> names;
  std::vector<std::vector<double>> data;

  void add_channel(const std::string& name);
  void push(const std::vector<double>& row);
  std::size_t size() const { return data.empty() ? 0 : data.front().size(); }
  bool has(const std::string& name) const;
  const std::vector<double>& column(const std::string& name) const;
};

// Comma separated, header row, %.11e (12 significant digits).
void write_csv(const TimeSeries& s, const std::string& path);
TimeSeries read_csv(const std::string& path);

// Legacy ASCII unstructured grid with point data u, phi and per-cell
// stress invariants (trace and von Mises of the cell-averaged S).
void write_vtk(const Mesh& mesh, const Eigen::VectorXd& u, const Eigen::VectorXd& phi,
               const std::vector<SymTensor2<double>>& cell_stress, const std::string& path);

std::string vtk_filename(const std::string& dir, const std::string& stem, int step);

}  // namespace fvd
