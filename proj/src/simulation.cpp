#include "fvd/simulation.hpp"

#include <algorithm>
#include <cmath>

#include "fvd/errors.hpp"

namespace fvd {

struct Simulation::Attempt {
  double t1 = 0.0;
  std::vector<HistoryDigest> digests;
  std::vector<PointState> states;
  Eigen::VectorXd phi, u;
  std::vector<QpResult> res;
  StepReport rep;
};

Simulation::Simulation(Discretization disc, MaterialParams m, SolverSettings s, double dt)
    : disc_(std::move(disc)), mat_(m), set_(s), dt_(dt), coeffs_(m.alpha, 2) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  if (mat_.dim() != disc_.dim) throw ConfigError("plane setting does not match the mesh dimension");
  const int nd = disc_.ndof();
  const int nn = static_cast<int>(disc_.mesh.num_nodes());
  u_ = v_ = a_ = Eigen::VectorXd::Zero(nd);
  phi_ = phi_base_ = Eigen::VectorXd::Zero(nn);
  qp_.resize(static_cast<std::size_t>(disc_.num_qp));
  for (auto& q : qp_) {
    q.history = StrainHistory(disc_.dim, dt);
    q.E = SymTensor2<double>(disc_.dim);
    q.S = SymTensor2<double>(disc_.dim);
  }
  for (std::size_t e = 0; e < disc_.geo.size(); ++e)
    for (std::size_t k = 0; k < disc_.geo[e].size(); ++k) elem_of_qp_.push_back(static_cast<int>(e));
}

void Simulation::set_initial_damage(const Eigen::VectorXd& phi) {
  if (phi.size() != phi_.size()) throw ConfigError("initial damage has the wrong size");
  if (phi.minCoeff() < 0.0 || phi.maxCoeff() > 1.0) throw ConfigError("initial damage outside [0,1]");
  phi_ = phi_base_ = phi;
}

std::array<double, 2> Simulation::qp_position(int i) const {
  const int e = elem_of_qp_[static_cast<std::size_t>(i)];
  return disc_.geo[e][i - disc_.qp_offset[e]].x;
}

double Simulation::qp_phi(int i) const {
  const int e = elem_of_qp_[static_cast<std::size_t>(i)];
  const auto& g = disc_.geo[e][i - disc_.qp_offset[e]];
  double s = 0.0;
  const auto& conn = disc_.mesh.elements[e];
  for (std::size_t a = 0; a < conn.size(); ++a) s += g.N[a] * phi_[conn[a]];
  return std::clamp(s, 0.0, 1.0);
}

namespace {

Eigen::VectorXd gather(const Eigen::VectorXd& x, const std::vector<int>& dofs) {
  Eigen::VectorXd out(dofs.size());
  for (std::size_t i = 0; i < dofs.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[dofs[i]];
  return out;
}

Eigen::VectorXd gather_nodes(const Eigen::VectorXd& x, const std::vector<int>& nodes) {
  Eigen::VectorXd out(nodes.size());
  for (std::size_t i = 0; i < nodes.size(); ++i) out[static_cast<Eigen::Index>(i)] = x[nodes[i]];
  return out;
}

}  // namespace

void Simulation::solve_damage(Attempt& at) {
  if (!set_.damage_enabled) {
    at.phi = phi_;
    return;
  }
  const int dim = disc_.dim;
  std::vector<DamageQpData> dq(qp_.size());
  for (std::size_t i = 0; i < qp_.size(); ++i) {
    SymTensor2<double> C = right_cauchy_green(qp_[i].E);
    require_admissible(C);
    dq[i].Cinv = inverse(C);
    dq[i].psi = qp_[i].psi_h + qp_[i].psi_m;
  }
  const int nn = static_cast<int>(phi_.size());
  const double dt = dt_;
  SystemFn fn = [&](const Eigen::VectorXd& phi, Eigen::VectorXd& R, Eigen::SparseMatrix<double>* J) {
    Assembler asmb(nn);
    Eigen::VectorXd Re;
    Eigen::MatrixXd Je;
    for (std::size_t e = 0; e < disc_.geo.size(); ++e) {
      const auto& conn = disc_.mesh.elements[e];
      const int off = disc_.qp_offset[e];
      std::vector<DamageQpData> local(dq.begin() + off, dq.begin() + off + static_cast<long>(disc_.geo[e].size()));
      damage_element(disc_.geo[e], dim, gather_nodes(phi, conn), gather_nodes(phi_, conn), local, mat_, dt, &Re,
                     J ? &Je : nullptr);
      asmb.add(conn, &Re, J ? &Je : nullptr);
    }
    R = asmb.residual();
    if (J) *J = asmb.matrix();
  };
  Eigen::VectorXd x = phi_;
  auto project = [](Eigen::VectorXd& p) { p = p.cwiseMax(0.0).cwiseMin(1.0); };
  NewtonReport r = newton_solve(fn, x, set_.damage, dim == 1, project);
  at.rep.damage_iterations = r.iterations;
  at.phi = set_.clamp ? irreversibility_clamp(x, phi_base_) : x;
}

void Simulation::solve_motion(const LoadState& ld, Attempt& at) {
  const int dim = disc_.dim;
  const int nd = disc_.ndof();
  NewmarkParams nm{set_.beta, dt_, set_.inertia};
  std::vector<int> fixed;
  Eigen::VectorXd x = u_;
  for (const auto& [dof, val] : ld.prescribed) {
    if (dof < 0 || dof >= nd) throw ConfigError("prescribed dof out of range");
    x[dof] = val;
    fixed.push_back(dof);
  }
  const double inv_rho = 1.0 / mat_.rho;

  auto eval = [&](const Eigen::VectorXd& u, Eigen::VectorXd* R, Eigen::SparseMatrix<double>* J,
                  std::vector<QpResult>* res) {
    Assembler asmb(nd);
    Eigen::VectorXd Re;
    Eigen::MatrixXd Je;
    std::vector<QpResult> local;
    for (std::size_t e = 0; e < disc_.geo.size(); ++e) {
      const auto dofs = disc_.element_dofs(e);
      const auto& conn = disc_.mesh.elements[e];
      MotionElementData d{gather(u, dofs), gather(u_, dofs), gather(v_, dofs), gather(a_, dofs),
                          gather_nodes(at.phi, conn)};
      const int off = disc_.qp_offset[e];
      std::vector<PointState> st(at.states.begin() + off,
                                 at.states.begin() + off + static_cast<long>(disc_.geo[e].size()));
      motion_element(disc_.geo[e], dim, d, st, mat_, set_.mode, nm, ld.body, R ? &Re : nullptr,
                     J ? &Je : nullptr, res ? &local : nullptr);
      asmb.add(dofs, R ? &Re : nullptr, J ? &Je : nullptr);
      if (res) std::copy(local.begin(), local.end(), res->begin() + off);
    }
    if (R) {
      *R = asmb.residual();
      if (ld.external.size() == nd) *R -= inv_rho * ld.external;
    }
    if (J) *J = asmb.matrix();
  };

  SystemFn fn = [&](const Eigen::VectorXd& u, Eigen::VectorXd& R, Eigen::SparseMatrix<double>* J) {
    Eigen::SparseMatrix<double> Jl;
    eval(u, &R, J ? &Jl : nullptr, nullptr);
    if (J) {
      apply_dirichlet(Jl, R, fixed);
      *J = std::move(Jl);
    } else {
      for (int d : fixed) R[d] = 0.0;
    }
  };
  NewtonReport r = newton_solve(fn, x, set_.motion, dim == 1);
  at.rep.motion_iterations = r.iterations;
  at.rep.motion_increments = r.increments;
  at.u = x;
  at.res.assign(qp_.size(), QpResult{});
  eval(x, nullptr, nullptr, &at.res);
}

void Simulation::attempt(const LoadFn& loads, Attempt& at) {
  at.t1 = t_ + dt_;
  const std::size_t n = qp_.empty() ? 0 : qp_.front().history.size() - 1;
  coeffs_.ensure(n + 2);
  const bool moments = set_.mode == StressMode::Complete && mat_.memory == MemoryTensor::A1;
  at.digests.clear();
  at.states.assign(qp_.size(), PointState{});
  if (mat_.memory_enabled) {
    at.digests.reserve(qp_.size());
    for (const auto& q : qp_) at.digests.push_back(digest_history(q.history, coeffs_, moments));
  }
  for (std::size_t i = 0; i < qp_.size(); ++i) {
    PointState& s = at.states[i];
    s.e_prev = qp_[i].E;
    s.dt = dt_;
    s.memory = mat_.memory_enabled ? &at.digests[i] : nullptr;
  }
  solve_damage(at);
  LoadState ld = loads(at.t1);
  solve_motion(ld, at);
}

void Simulation::halve() {
  dt_ *= 0.5;
  for (auto& q : qp_) q.history.refine();
}

StepReport Simulation::step(const LoadFn& loads) {
  Attempt at;
  int halvings = 0;
  for (;;) {
    std::string why;
    try {
      attempt(loads, at);
      break;
    } catch (const ElementInversion& e) {
      why = e.what();
    } catch (const NonConvergence& e) {
      why = e.what();
    }
    // the cap counts every halving of the run, since each one is permanent
    if (halvings_total_ >= set_.max_halvings)
      throw SolverDivergence("step at t = " + std::to_string(t_) + " (dt = " + std::to_string(dt_) +
                             ") failed after " + std::to_string(halvings_total_) + " halvings: " + why);
    halve();
    ++halvings;
    ++halvings_total_;
  }

  // accept
  NewmarkParams nm{set_.beta, dt_, set_.inertia};
  if (set_.inertia) {
    Eigen::VectorXd a1 = newmark_accel(at.u, u_, v_, a_, nm);
    v_ = newmark_velocity(v_, a_, a1, nm);
    a_ = a1;
  } else {
    v_ = (at.u - u_) / dt_;
    a_.setZero();
  }
  u_ = at.u;
  phi_ = at.phi;
  phi_base_ = phi_;

  for (std::size_t i = 0; i < qp_.size(); ++i) {
    QpState& q = qp_[i];
    const QpResult& r = at.res[i];
    if (mat_.memory_enabled) {
      Tensor4<double> A = assemble_A(right_cauchy_green(r.E), mat_);
      const double G = degradation(qp_phi(static_cast<int>(i)), mat_).G;
      q.psi_m = memory_potential(q.history, r.E, A, mat_.alpha, false);
      q.R = r_term(q.history, r.E, A, mat_.alpha, r_prefactor(G, 1.0, mat_.alpha), false);
    }
    q.history.append(r.E);
    q.E = r.E;
    q.S = r.S;
    q.psi_h = elastic_energy(r.E, mat_);
  }
  t_ = at.t1;
  ++steps_;
  at.rep.halvings = halvings;
  at.rep.dt = dt_;
  return at.rep;
}

StepReport staggered_step(Simulation& sim, const LoadFn& loads) { return sim.step(loads); }

}  // namespace fvd
