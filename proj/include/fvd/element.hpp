#pragma once

#include <array>
#include <vector>

#include <Eigen/Dense>

#include "fvd/mesh.hpp"

namespace fvd {

struct QuadPoint {
  double xi = 0.0, eta = 0.0, w = 0.0;
};

// bar2: 2-point Gauss; tri3: 1 point; quad4: 2x2; quad8: 3x3
std::vector<QuadPoint> quadrature(ElementKind kind);

// Reference shape functions and their (ξ, η) derivatives.
void reference_shape(ElementKind kind, double xi, double eta, std::vector<double>& N,
                     std::vector<std::array<double, 2>>& dN);

// Mapped data at one quadrature point. dV includes weight, |J| and the
// thickness (2D) or cross-section area (1D).
struct QpGeometry {
  std::vector<double> N;
  std::vector<std::array<double, 2>> dN;  // global derivatives
  double dV = 0.0;
  std::array<double, 2> x{0.0, 0.0};
};

std::vector<QpGeometry> element_geometry(const Mesh& mesh, std::size_t e, double thickness);

struct ShapeMatrices {
  Eigen::RowVectorXd N;  // 1 × n
  Eigen::MatrixXd B;     // dim × n
  Eigen::MatrixXd Nhat;  // dim × dim·n
  Eigen::MatrixXd Bhat;  // dim² × dim·n, rows u1,1 u1,2 u2,1 u2,2
};

ShapeMatrices shape_matrices(const QpGeometry& g, int dim);

}  // namespace fvd
