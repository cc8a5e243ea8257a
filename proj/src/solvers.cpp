#include "fvd/solvers.hpp"

#include <algorithm>
#include <cmath>

#include "fvd/errors.hpp"

namespace fvd {

Eigen::VectorXd newmark_accel(const Eigen::VectorXd& u_next, const Eigen::VectorXd& u_n, const Eigen::VectorXd& v_n,
                              const Eigen::VectorXd& a_n, const NewmarkParams& p) {
  return p.a1() * (u_next - u_n) - p.a2() * v_n - p.a3() * a_n;
}

Eigen::VectorXd newmark_velocity(const Eigen::VectorXd& v_n, const Eigen::VectorXd& a_n,
                                 const Eigen::VectorXd& a_next, const NewmarkParams& p) {
  return v_n + 0.5 * p.dt * (a_n + a_next);
}

NewtonReport newton_solve(const SystemFn& fn, Eigen::VectorXd& x, const NewtonConfig& cfg, bool dense,
                          const std::function<void(Eigen::VectorXd&)>& project) {
  NewtonReport rep;
  Eigen::VectorXd R;
  Eigen::SparseMatrix<double> J;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    fn(x, R, &J);
    if (!R.allFinite()) throw NonConvergence("non-finite residual");
    Eigen::VectorXd dx = solve_linear(J, -R, dense);
    if (!dx.allFinite()) throw NonConvergence("non-finite Newton increment");
    Eigen::VectorXd prev = x;
    x += dx;
    if (project) project(x);
    const double inc = (x - prev).norm();
    rep.iterations = it;
    rep.increments.push_back(inc);
    if (inc <= std::max(cfg.tol, cfg.rel_floor * x.norm())) return rep;
  }
  throw NonConvergence("Newton iteration limit reached");
}

double newton_solve(const std::function<double(double)>& f, const std::function<double(double)>& df, double x0,
                    const NewtonConfig& cfg, int* iterations) {
  double x = x0;
  for (int it = 1; it <= cfg.max_iter; ++it) {
    const double d = df(x);
    if (d == 0.0 || !std::isfinite(d)) throw NonConvergence("zero derivative");
    const double dx = -f(x) / d;
    x += dx;
    if (iterations) *iterations = it;
    if (std::abs(dx) <= std::max(cfg.tol, cfg.rel_floor * std::abs(x))) return x;
  }
  throw NonConvergence("Newton iteration limit reached");
}

Eigen::VectorXd irreversibility_clamp(const Eigen::VectorXd& pred, const Eigen::VectorXd& base) {
  Eigen::VectorXd out(pred.size());
  for (Eigen::Index i = 0; i < pred.size(); ++i) out[i] = std::clamp(std::max(pred[i], base[i]), 0.0, 1.0);
  return out;
}

}  // namespace fvd
