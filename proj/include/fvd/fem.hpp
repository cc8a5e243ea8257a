#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fvd/element.hpp"
#include "fvd/material.hpp"
#include "fvd/mesh.hpp"

namespace fvd {

// Mesh plus cached quadrature data. Quadrature points are numbered
// element by element: global qp = qp_offset[e] + local index.
struct Discretization {
  Mesh mesh;
  int dim = 2;
  double thickness = 1.0;  // plate thickness in 2D, cross-section area in 1D
  std::vector<std::vector<QpGeometry>> geo;
  std::vector<int> qp_offset;
  int num_qp = 0;

  Discretization() = default;
  Discretization(Mesh m, double thickness);
  int ndof() const { return dim * static_cast<int>(mesh.num_nodes()); }
  std::vector<int> element_dofs(std::size_t e) const;
  double volume() const;
};

struct NewmarkParams {
  double beta = 0.25;
  double dt = 1.0;
  bool inertia = true;  // false: quasi-static, a₁M dropped
  double a1() const { return 1.0 / (beta * dt * dt); }
  double a2() const { return 1.0 / (beta * dt); }
  double a3() const { return (1.0 - 2.0 * beta) / (2.0 * beta); }
};

// Element nodal data in element dof order (node-interleaved components).
struct MotionElementData {
  Eigen::VectorXd u, u_n, v_n, a_n;
  Eigen::VectorXd phi;  // damage at t_{n+1}, one value per node
};

struct QpResult {
  SymTensor2<double> E{1};
  SymTensor2<double> S{1};
};

// Residual and/or Jacobian of the motion equation for one element. `states`
// carries history data per qp; φ and ∇φ are overwritten from the nodal field.
// `body` is a body force per unit mass. Throws ElementInversion on det F <= 0.
void motion_element(const std::vector<QpGeometry>& geo, int dim, const MotionElementData& d,
                    const std::vector<PointState>& states, const MaterialParams& m, StressMode mode,
                    const NewmarkParams& nm, const std::array<double, 2>& body, Eigen::VectorXd* R,
                    Eigen::MatrixXd* J, std::vector<QpResult>* qp_out = nullptr);

Eigen::VectorXd motion_residual(const std::vector<QpGeometry>& geo, int dim, const MotionElementData& d,
                                const std::vector<PointState>& states, const MaterialParams& m,
                                StressMode mode, const NewmarkParams& nm, const std::array<double, 2>& body);
Eigen::MatrixXd motion_jacobian(const std::vector<QpGeometry>& geo, int dim, const MotionElementData& d,
                                const std::vector<PointState>& states, const MaterialParams& m,
                                StressMode mode, const NewmarkParams& nm);

Eigen::MatrixXd element_mass(const std::vector<QpGeometry>& geo, int dim);

// Per-qp inputs of the damage equation, all taken at t_n.
struct DamageQpData {
  SymTensor2<double> Cinv{1};
  double psi = 0.0;  // ψ_h + ψ̃ₘ, volumetric
};

void damage_element(const std::vector<QpGeometry>& geo, int dim, const Eigen::VectorXd& phi,
                    const Eigen::VectorXd& phi_n, const std::vector<DamageQpData>& qp, const MaterialParams& m,
                    double dt, Eigen::VectorXd* R, Eigen::MatrixXd* J);

Eigen::VectorXd damage_residual(const std::vector<QpGeometry>& geo, int dim, const Eigen::VectorXd& phi,
                                const Eigen::VectorXd& phi_n, const std::vector<DamageQpData>& qp,
                                const MaterialParams& m, double dt);
Eigen::MatrixXd damage_jacobian(const std::vector<QpGeometry>& geo, int dim, const Eigen::VectorXd& phi,
                                const Eigen::VectorXd& phi_n, const std::vector<DamageQpData>& qp,
                                const MaterialParams& m, double dt);

// Scatter-add of element contributions.
class Assembler {
 public:
  explicit Assembler(int n);
  void add(const std::vector<int>& dofs, const Eigen::VectorXd* Re, const Eigen::MatrixXd* Je);
  Eigen::VectorXd& residual() { return R_; }
  Eigen::SparseMatrix<double> matrix() const;

 private:
  int n_;
  Eigen::VectorXd R_;
  std::vector<Eigen::Triplet<double>> trip_;
};

// Increment form: constrained rows/columns are replaced by identity rows and
// zero right-hand side, so a Newton step keeps prescribed values untouched.
void apply_dirichlet(Eigen::SparseMatrix<double>& J, Eigen::VectorXd& R, const std::vector<int>& dofs);

// Direct solve; dense LU when `dense` (1D), sparse LU otherwise.
Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs, bool dense);

// ∫ N̂ᵀ t dΓ over the facets of a boundary set; in 1D a point force t·area per node.
Eigen::VectorXd boundary_load(const Discretization& disc, const std::string& set,
                              const std::array<double, 2>& traction);
// Facet length × thickness summed over the set (area·nodes in 1D).
double boundary_measure(const Discretization& disc, const std::string& set);

// Displacement gradient at a qp from element nodal displacements.
Mat2<double> displacement_gradient(const QpGeometry& g, int dim, const Eigen::VectorXd& u);

}  // namespace fvd
