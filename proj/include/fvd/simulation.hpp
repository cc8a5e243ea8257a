#pragma once

#include <array>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "fvd/fem.hpp"
#include "fvd/fractional.hpp"
#include "fvd/material.hpp"
#include "fvd/solvers.hpp"

namespace fvd {

// Loads acting at the end of the step being solved.
struct LoadState {
  std::vector<std::pair<int, double>> prescribed;  // dof, value
  Eigen::VectorXd external;                        // integrated boundary forces (N); empty = none
  std::array<double, 2> body{0.0, 0.0};            // per unit mass
};

using LoadFn = std::function<LoadState(double t)>;

struct SolverSettings {
  NewtonConfig motion{1e-8, 30, 1e-13};
  NewtonConfig damage{1e-8, 60, 1e-13};
  StressMode mode = StressMode::Partial;
  bool clamp = true;
  bool damage_enabled = true;
  bool inertia = true;
  double beta = 0.25;
  int max_halvings = 5;
};

struct StepReport {
  int motion_iterations = 0;
  int damage_iterations = 0;
  int halvings = 0;
  std::vector<double> motion_increments;
  double dt = 0.0;
};

// Per quadrature point bookkeeping of the last accepted state.
struct QpState {
  StrainHistory history;
  SymTensor2<double> E{1};
  SymTensor2<double> S{1};
  double psi_h = 0.0;  // undegraded elastic energy density
  double psi_m = 0.0;  // ρψ̃ₘ
  double R = 0.0;      // entropy-production density (volumetric)
};

class Simulation {
 public:
  Simulation(Discretization disc, MaterialParams m, SolverSettings s, double dt);

  const Discretization& disc() const { return disc_; }
  const MaterialParams& material() const { return mat_; }
  const SolverSettings& settings() const { return set_; }
  double time() const { return t_; }
  double dt() const { return dt_; }
  int steps() const { return steps_; }

  const Eigen::VectorXd& u() const { return u_; }
  const Eigen::VectorXd& v() const { return v_; }
  const Eigen::VectorXd& a() const { return a_; }
  const Eigen::VectorXd& phi() const { return phi_; }
  const Eigen::VectorXd& phi_baseline() const { return phi_base_; }
  void set_initial_damage(const Eigen::VectorXd& phi);

  const QpState& qp(int i) const { return qp_[static_cast<std::size_t>(i)]; }
  int num_qp() const { return disc_.num_qp; }
  std::array<double, 2> qp_position(int i) const;
  double qp_phi(int i) const;

  // One accepted staggered step; on failure the step is retried with Δt halved
  // (histories are resampled). Halvings are permanent and capped at max_halvings per run;
  // past the cap the step throws SolverDivergence.
  StepReport step(const LoadFn& loads);

 private:
  struct Attempt;
  void attempt(const LoadFn& loads, Attempt& out);
  void halve();
  void solve_damage(Attempt& at);
  void solve_motion(const LoadState& ld, Attempt& at);

  Discretization disc_;
  MaterialParams mat_;
  SolverSettings set_;
  double dt_;
  double t_ = 0.0;
  int steps_ = 0;
  int halvings_total_ = 0;
  G1Coefficients coeffs_;
  Eigen::VectorXd u_, v_, a_, phi_, phi_base_;
  std::vector<QpState> qp_;
  std::vector<int> elem_of_qp_;
};

// Same as sim.step(loads); kept as a free function for symmetry with the other solvers.
StepReport staggered_step(Simulation& sim, const LoadFn& loads);

}  // namespace fvd
