#pragma once

#include <functional>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include "fvd/fem.hpp"

namespace fvd {

Eigen::VectorXd newmark_accel(const Eigen::VectorXd& u_next, const Eigen::VectorXd& u_n, const Eigen::VectorXd& v_n,
                              const Eigen::VectorXd& a_n, const NewmarkParams& p);
// average-acceleration companion
Eigen::VectorXd newmark_velocity(const Eigen::VectorXd& v_n, const Eigen::VectorXd& a_n,
                                 const Eigen::VectorXd& a_next, const NewmarkParams& p);

struct NewtonConfig {
  double tol = 1e-8;   // on ‖x_{i+1} − x_i‖
  int max_iter = 30;
  // increments below rel_floor·‖x‖ count as converged (round-off level)
  double rel_floor = 1e-13;
};

struct NewtonReport {
  int iterations = 0;
  std::vector<double> increments;
};

// Fills R and, when J is non-null, the Jacobian at x.
using SystemFn = std::function<void(const Eigen::VectorXd& x, Eigen::VectorXd& R, Eigen::SparseMatrix<double>* J)>;

// Plain full-step Newton. `project` (optional) is applied to every iterate.
// Throws NonConvergence after max_iter or on a singular system.
NewtonReport newton_solve(const SystemFn& fn, Eigen::VectorXd& x, const NewtonConfig& cfg, bool dense,
                          const std::function<void(Eigen::VectorXd&)>& project = {});

// Scalar convenience overload.
double newton_solve(const std::function<double(double)>& f, const std::function<double(double)>& df, double x0,
                    const NewtonConfig& cfg, int* iterations = nullptr);

// Nodewise max(φ*, φₙ), clipped into [0,1].
Eigen::VectorXd irreversibility_clamp(const Eigen::VectorXd& phi_predicted, const Eigen::VectorXd& phi_baseline);

}  // namespace fvd
