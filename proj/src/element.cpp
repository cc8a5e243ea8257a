#include "fvd/element.hpp"

#include <cmath>

#include "fvd/errors.hpp"

namespace fvd {

std::vector<QuadPoint> quadrature(ElementKind kind) {
  const double g2 = 1.0 / std::sqrt(3.0);
  const double g3 = std::sqrt(0.6);
  switch (kind) {
    case ElementKind::Bar2: return {{-g2, 0.0, 1.0}, {g2, 0.0, 1.0}};
    case ElementKind::Tri3: return {{1.0 / 3.0, 1.0 / 3.0, 0.5}};
    case ElementKind::Quad4: {
      std::vector<QuadPoint> q;
      for (double y : {-g2, g2})
        for (double x : {-g2, g2}) q.push_back({x, y, 1.0});
      return q;
    }
    case ElementKind::Quad8: {
      const double p[3] = {-g3, 0.0, g3};
      const double w[3] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
      std::vector<QuadPoint> q;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i) q.push_back({p[i], p[j], w[i] * w[j]});
      return q;
    }
  }
  return {};
}

void reference_shape(ElementKind kind, double xi, double eta, std::vector<double>& N,
                     std::vector<std::array<double, 2>>& dN) {
  const int n = nodes_per_element(kind);
  N.assign(n, 0.0);
  dN.assign(n, {0.0, 0.0});
  switch (kind) {
    case ElementKind::Bar2:
      N = {0.5 * (1.0 - xi), 0.5 * (1.0 + xi)};
      dN = {{-0.5, 0.0}, {0.5, 0.0}};
      break;
    case ElementKind::Tri3:
      N = {1.0 - xi - eta, xi, eta};
      dN = {{-1.0, -1.0}, {1.0, 0.0}, {0.0, 1.0}};
      break;
    case ElementKind::Quad4: {
      const double sx[4] = {-1, 1, 1, -1}, sy[4] = {-1, -1, 1, 1};
      for (int a = 0; a < 4; ++a) {
        N[a] = 0.25 * (1 + sx[a] * xi) * (1 + sy[a] * eta);
        dN[a] = {0.25 * sx[a] * (1 + sy[a] * eta), 0.25 * sy[a] * (1 + sx[a] * xi)};
      }
      break;
    }
    case ElementKind::Quad8: {
      const double sx[4] = {-1, 1, 1, -1}, sy[4] = {-1, -1, 1, 1};
      for (int a = 0; a < 4; ++a) {
        const double x = sx[a] * xi, y = sy[a] * eta;
        N[a] = 0.25 * (1 + x) * (1 + y) * (x + y - 1);
        dN[a] = {0.25 * sx[a] * (1 + y) * (2 * x + y), 0.25 * sy[a] * (1 + x) * (x + 2 * y)};
      }
      // mid-side nodes 4:(0-1) 5:(1-2) 6:(2-3) 7:(3-0)
      N[4] = 0.5 * (1 - xi * xi) * (1 - eta);
      dN[4] = {-xi * (1 - eta), -0.5 * (1 - xi * xi)};
      N[5] = 0.5 * (1 + xi) * (1 - eta * eta);
      dN[5] = {0.5 * (1 - eta * eta), -eta * (1 + xi)};
      N[6] = 0.5 * (1 - xi * xi) * (1 + eta);
      dN[6] = {-xi * (1 + eta), 0.5 * (1 - xi * xi)};
      N[7] = 0.5 * (1 - xi) * (1 - eta * eta);
      dN[7] = {-0.5 * (1 - eta * eta), -eta * (1 - xi)};
      break;
    }
  }
}

std::vector<QpGeometry> element_geometry(const Mesh& mesh, std::size_t e, double thickness) {
  const auto& conn = mesh.elements[e];
  const int n = static_cast<int>(conn.size());
  std::vector<QpGeometry> out;
  std::vector<double> N;
  std::vector<std::array<double, 2>> dN;
  for (const QuadPoint& q : quadrature(mesh.kind)) {
    reference_shape(mesh.kind, q.xi, q.eta, N, dN);
    QpGeometry g;
    g.N = N;
    g.dN.assign(n, {0.0, 0.0});
    for (int a = 0; a < n; ++a)
      for (int k = 0; k < 2; ++k) g.x[k] += N[a] * mesh.nodes[conn[a]][k];
    if (mesh.dim == 1) {
      double J = 0.0;
      for (int a = 0; a < n; ++a) J += dN[a][0] * mesh.nodes[conn[a]][0];
      if (!(J > 0.0)) throw ConfigError("non-positive element Jacobian in element " + std::to_string(e));
      for (int a = 0; a < n; ++a) g.dN[a][0] = dN[a][0] / J;
      g.dV = q.w * J * thickness;
    } else {
      // J_ij = ∂x_i/∂ξ_j
      double J[2][2] = {{0, 0}, {0, 0}};
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) J[i][j] += mesh.nodes[conn[a]][i] * dN[a][j];
      const double det = J[0][0] * J[1][1] - J[0][1] * J[1][0];
      if (!(det > 0.0)) throw ConfigError("non-positive element Jacobian in element " + std::to_string(e));
      const double inv[2][2] = {{J[1][1] / det, -J[0][1] / det}, {-J[1][0] / det, J[0][0] / det}};
      for (int a = 0; a < n; ++a)
        for (int i = 0; i < 2; ++i) g.dN[a][i] = dN[a][0] * inv[0][i] + dN[a][1] * inv[1][i];
      g.dV = q.w * det * thickness;
    }
    out.push_back(std::move(g));
  }
  return out;
}

ShapeMatrices shape_matrices(const QpGeometry& g, int dim) {
  const int n = static_cast<int>(g.N.size());
  ShapeMatrices s;
  s.N = Eigen::Map<const Eigen::RowVectorXd>(g.N.data(), n);
  s.B.resize(dim, n);
  for (int a = 0; a < n; ++a)
    for (int i = 0; i < dim; ++i) s.B(i, a) = g.dN[a][i];
  s.Nhat = Eigen::MatrixXd::Zero(dim, dim * n);
  s.Bhat = Eigen::MatrixXd::Zero(dim * dim, dim * n);
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < dim; ++c) {
      s.Nhat(c, dim * a + c) = g.N[a];
      for (int j = 0; j < dim; ++j) s.Bhat(dim * c + j, dim * a + c) = g.dN[a][j];
    }
  return s;
}

}  // namespace fvd
