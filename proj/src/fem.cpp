#include "fvd/fem.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/SparseLU>

#include "fvd/errors.hpp"

namespace fvd {

Discretization::Discretization(Mesh m, double thick) : mesh(std::move(m)), dim(mesh.dim), thickness(thick) {
  mesh.validate();
  if (!(thickness > 0.0)) throw ConfigError("thickness / cross-section area must be positive");
  geo.reserve(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    qp_offset.push_back(num_qp);
    geo.push_back(element_geometry(mesh, e, thickness));
    num_qp += static_cast<int>(geo.back().size());
  }
}

std::vector<int> Discretization::element_dofs(std::size_t e) const {
  std::vector<int> d;
  d.reserve(mesh.elements[e].size() * dim);
  for (int n : mesh.elements[e])
    for (int c = 0; c < dim; ++c) d.push_back(dim * n + c);
  return d;
}

double Discretization::volume() const {
  double v = 0.0;
  for (const auto& g : geo)
    for (const auto& q : g) v += q.dV;
  return v;
}

Mat2<double> displacement_gradient(const QpGeometry& g, int dim, const Eigen::VectorXd& u) {
  Mat2<double> grad(dim);
  const int n = static_cast<int>(g.N.size());
  for (int a = 0; a < n; ++a)
    for (int c = 0; c < dim; ++c)
      for (int j = 0; j < dim; ++j) grad(c, j) += g.dN[a][j] * u[dim * a + c];
  return grad;
}

Eigen::MatrixXd element_mass(const std::vector<QpGeometry>& geo, int dim) {
  const int nd = dim * static_cast<int>(geo.front().N.size());
  Eigen::MatrixXd M = Eigen::MatrixXd::Zero(nd, nd);
  for (const auto& g : geo) {
    ShapeMatrices s = shape_matrices(g, dim);
    M.noalias() += s.Nhat.transpose() * s.Nhat * g.dV;
  }
  return M;
}

void motion_element(const std::vector<QpGeometry>& geo, int dim, const MotionElementData& d,
                    const std::vector<PointState>& states, const MaterialParams& m, StressMode mode,
                    const NewmarkParams& nm, const std::array<double, 2>& body, Eigen::VectorXd* R,
                    Eigen::MatrixXd* J, std::vector<QpResult>* qp_out) {
  const int n = static_cast<int>(geo.front().N.size());
  const int nd = dim * n;
  if (R) *R = Eigen::VectorXd::Zero(nd);
  if (J) *J = Eigen::MatrixXd::Zero(nd, nd);
  if (qp_out) qp_out->assign(geo.size(), QpResult{});
  Eigen::VectorXd acc = Eigen::VectorXd::Zero(nd);
  if (nm.inertia) acc = nm.a1() * (d.u - d.u_n) - nm.a2() * d.v_n - nm.a3() * d.a_n;
  Eigen::VectorXd f(dim);
  for (int c = 0; c < dim; ++c) f[c] = body[c];
  const double inv_rho = 1.0 / m.rho;

  for (std::size_t q = 0; q < geo.size(); ++q) {
    const QpGeometry& g = geo[q];
    ShapeMatrices sm = shape_matrices(g, dim);
    Mat2<double> grad = displacement_gradient(g, dim, d.u);
    Mat2<double> F = deformation_gradient(grad);
    if (!(det(F) > 0.0)) throw ElementInversion("det F <= 0 at a quadrature point");
    SymTensor2<double> E = green_lagrange(grad);

    PointState st = states[q];
    st.phi = std::clamp(sm.N.dot(d.phi), 0.0, 1.0);
    Eigen::VectorXd gphi = sm.B * d.phi;
    st.grad_phi = {gphi[0], dim == 2 ? gphi[1] : 0.0};
    SymTensor2<double> S = second_piola(E, st, m, mode);
    if (qp_out) (*qp_out)[q] = {E, S};

    if (dim == 2) {
      Eigen::Matrix<double, 3, 4> Fb = build_Fbar(F);
      Eigen::Vector3d s(S[0], S[1], S[2]);
      if (R) R->noalias() += inv_rho * g.dV * (sm.Bhat.transpose() * (Fb.transpose() * s));
      if (J) {
        Tensor4<double> Dt = tangent_stiffness(E, st, m, mode);
        Eigen::Matrix3d D;
        for (int i = 0; i < 3; ++i)
          for (int j = 0; j < 3; ++j) D(i, j) = Dt(i, j);
        Eigen::Matrix4d K = build_Sbar(S) + Fb.transpose() * D * Fb;
        J->noalias() += inv_rho * g.dV * (sm.Bhat.transpose() * K * sm.Bhat);
      }
    } else {
      const double F11 = F(0, 0);
      if (R) R->noalias() += inv_rho * g.dV * F11 * S[0] * sm.Bhat.transpose();
      if (J) {
        const double D = tangent_stiffness(E, st, m, mode)(0, 0);
        J->noalias() += inv_rho * g.dV * (S[0] + F11 * D * F11) * (sm.Bhat.transpose() * sm.Bhat);
      }
    }

    Eigen::MatrixXd Mq = sm.Nhat.transpose() * sm.Nhat * g.dV;
    if (R) {
      if (nm.inertia) R->noalias() += Mq * acc;
      R->noalias() -= g.dV * (sm.Nhat.transpose() * f);
    }
    if (J && nm.inertia) J->noalias() += nm.a1() * Mq;
  }
}

Eigen::VectorXd motion_residual(const std::vector<QpGeometry>& geo, int dim, const MotionElementData& d,
                                const std::vector<PointState>& states, const MaterialParams& m,
                                StressMode mode, const NewmarkParams& nm, const std::array<double, 2>& body) {
  Eigen::VectorXd R;
  motion_element(geo, dim, d, states, m, mode, nm, body, &R, nullptr);
  return R;
}

Eigen::MatrixXd motion_jacobian(const std::vector<QpGeometry>& geo, int dim, const MotionElementData& d,
                                const std::vector<PointState>& states, const MaterialParams& m,
                                StressMode mode, const NewmarkParams& nm) {
  Eigen::MatrixXd J;
  motion_element(geo, dim, d, states, m, mode, nm, {0.0, 0.0}, nullptr, &J);
  return J;
}

namespace {
Eigen::MatrixXd cinv_matrix(const SymTensor2<double>& c, int dim) {
  Eigen::MatrixXd M(dim, dim);
  if (dim == 1) {
    M(0, 0) = c[0];
  } else {
    M << c[0], c[2], c[2], c[1];
  }
  return M;
}
}  // namespace

void damage_element(const std::vector<QpGeometry>& geo, int dim, const Eigen::VectorXd& phi,
                    const Eigen::VectorXd& phi_n, const std::vector<DamageQpData>& qp, const MaterialParams& m,
                    double dt, Eigen::VectorXd* R, Eigen::MatrixXd* J) {
  const int n = static_cast<int>(phi.size());
  if (R) *R = Eigen::VectorXd::Zero(n);
  if (J) *J = Eigen::MatrixXd::Zero(n, n);
  const double th = m.theta0;
  for (std::size_t q = 0; q < geo.size(); ++q) {
    const QpGeometry& g = geo[q];
    ShapeMatrices sm = shape_matrices(g, dim);
    const double ph = sm.N.dot(phi);
    const double phn = sm.N.dot(phi_n);
    Eigen::VectorXd gphn = sm.B * phi_n;
    Eigen::MatrixXd Ci = cinv_matrix(qp[q].Cinv, dim);
    // 1/λ̃ and its gradient are delayed to t_n
    const double k = inverse_lambda(phn, m);
    const Degradation G = degradation(std::clamp(ph, 0.0, 1.0), m);
    const double mass = 1.0 + dt * m.gc * k / (m.gamma * th);
    const double diff = dt * m.gc * m.gamma * k / th;
    const double grad_coef = dt * m.gc * m.gamma * m.zeta * m.c_lambda * gphn.dot(Ci * gphn) /
                             (th * std::pow(1.0 + m.delta_tilde - phn, m.zeta + 1.0));
    const double drive = dt * k / th * qp[q].psi;
    Eigen::MatrixXd K = sm.B.transpose() * Ci * sm.B;
    if (R) {
      R->noalias() += g.dV * (mass * ph - phn + grad_coef + drive * G.dG) * sm.N.transpose();
      R->noalias() += g.dV * diff * (K * phi);
    }
    if (J) {
      J->noalias() += g.dV * (mass + drive * G.ddG) * (sm.N.transpose() * sm.N);
      J->noalias() += g.dV * diff * K;
    }
  }
}

Eigen::VectorXd damage_residual(const std::vector<QpGeometry>& geo, int dim, const Eigen::VectorXd& phi,
                                const Eigen::VectorXd& phi_n, const std::vector<DamageQpData>& qp,
                                const MaterialParams& m, double dt) {
  Eigen::VectorXd R;
  damage_element(geo, dim, phi, phi_n, qp, m, dt, &R, nullptr);
  return R;
}

Eigen::MatrixXd damage_jacobian(const std::vector<QpGeometry>& geo, int dim, const Eigen::VectorXd& phi,
                                const Eigen::VectorXd& phi_n, const std::vector<DamageQpData>& qp,
                                const MaterialParams& m, double dt) {
  Eigen::MatrixXd J;
  damage_element(geo, dim, phi, phi_n, qp, m, dt, nullptr, &J);
  return J;
}

Assembler::Assembler(int n) : n_(n), R_(Eigen::VectorXd::Zero(n)) {}

void Assembler::add(const std::vector<int>& dofs, const Eigen::VectorXd* Re, const Eigen::MatrixXd* Je) {
  const int k = static_cast<int>(dofs.size());
  if (Re)
    for (int i = 0; i < k; ++i) R_[dofs[i]] += (*Re)[i];
  if (Je)
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < k; ++j) trip_.emplace_back(dofs[i], dofs[j], (*Je)(i, j));
}

Eigen::SparseMatrix<double> Assembler::matrix() const {
  Eigen::SparseMatrix<double> J(n_, n_);
  J.setFromTriplets(trip_.begin(), trip_.end());
  return J;
}

void apply_dirichlet(Eigen::SparseMatrix<double>& J, Eigen::VectorXd& R, const std::vector<int>& dofs) {
  std::vector<char> fixed(static_cast<std::size_t>(J.rows()), 0);
  for (int d : dofs) {
    fixed[static_cast<std::size_t>(d)] = 1;
    R[d] = 0.0;
  }
  for (int c = 0; c < J.outerSize(); ++c)
    for (Eigen::SparseMatrix<double>::InnerIterator it(J, c); it; ++it)
      if (fixed[static_cast<std::size_t>(it.row())] || fixed[static_cast<std::size_t>(it.col())])
        it.valueRef() = it.row() == it.col() ? 1.0 : 0.0;
  // a fixed dof whose diagonal was never stored
  for (int d : dofs)
    if (J.coeff(d, d) != 1.0) J.coeffRef(d, d) = 1.0;
}

Eigen::VectorXd solve_linear(const Eigen::SparseMatrix<double>& J, const Eigen::VectorXd& rhs, bool dense) {
  if (dense) {
    Eigen::MatrixXd A(J);
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (!lu.isInvertible()) throw NonConvergence("singular linear system");
    return lu.solve(rhs);
  }
  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(J);
  if (lu.info() != Eigen::Success) throw NonConvergence("singular linear system");
  Eigen::VectorXd x = lu.solve(rhs);
  if (lu.info() != Eigen::Success) throw NonConvergence("linear solve failed");
  return x;
}

namespace {

void facet_rule(int nf, std::vector<double>& s, std::vector<double>& w) {
  if (nf == 2) {
    const double g = 1.0 / std::sqrt(3.0);
    s = {-g, g};
    w = {1.0, 1.0};
  } else {
    const double g = std::sqrt(0.6);
    s = {-g, 0.0, g};
    w = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
  }
}

void facet_shape(int nf, double s, double* N, double* dN) {
  if (nf == 2) {
    N[0] = 0.5 * (1 - s); N[1] = 0.5 * (1 + s);
    dN[0] = -0.5; dN[1] = 0.5;
  } else {
    // end, end, middle
    N[0] = 0.5 * s * (s - 1); N[1] = 0.5 * s * (s + 1); N[2] = 1 - s * s;
    dN[0] = s - 0.5; dN[1] = s + 0.5; dN[2] = -2 * s;
  }
}

}  // namespace

Eigen::VectorXd boundary_load(const Discretization& disc, const std::string& name,
                              const std::array<double, 2>& traction) {
  const BoundarySet& set = disc.mesh.set(name);
  const int dim = disc.dim;
  Eigen::VectorXd F = Eigen::VectorXd::Zero(disc.ndof());
  if (dim == 1) {
    for (int nd : set.nodes) F[nd] += traction[0] * disc.thickness;
    return F;
  }
  std::vector<double> s, w;
  for (const auto& f : set.facets) {
    const int nf = static_cast<int>(f.size());
    facet_rule(nf, s, w);
    double N[3], dN[3];
    for (std::size_t q = 0; q < s.size(); ++q) {
      facet_shape(nf, s[q], N, dN);
      double tx = 0, ty = 0;
      for (int a = 0; a < nf; ++a) {
        tx += dN[a] * disc.mesh.nodes[f[a]][0];
        ty += dN[a] * disc.mesh.nodes[f[a]][1];
      }
      const double jac = std::hypot(tx, ty) * w[q] * disc.thickness;
      for (int a = 0; a < nf; ++a)
        for (int c = 0; c < 2; ++c) F[2 * f[a] + c] += N[a] * traction[c] * jac;
    }
  }
  return F;
}

double boundary_measure(const Discretization& disc, const std::string& name) {
  Eigen::VectorXd F = boundary_load(disc, name, {1.0, 0.0});
  double s = 0.0;
  for (int i = 0; i < F.size(); i += disc.dim) s += F[i];
  return s;
}

}  // namespace fvd
