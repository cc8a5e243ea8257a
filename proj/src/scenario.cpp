#include "fvd/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>

#include "fvd/errors.hpp"

namespace fvd {

namespace {

int nearest_node(const Mesh& m, const std::array<double, 2>& p, const std::vector<int>* subset = nullptr) {
  int best = -1;
  double bd = std::numeric_limits<double>::infinity();
  auto test = [&](int i) {
    const double d = std::hypot(m.nodes[i][0] - p[0], m.nodes[i][1] - p[1]);
    if (d < bd) { bd = d; best = i; }
  };
  if (subset) for (int i : *subset) test(i);
  else for (int i = 0; i < static_cast<int>(m.num_nodes()); ++i) test(i);
  return best;
}

// Loading program state machine.
class LoadDriver {
 public:
  LoadDriver(const ScenarioConfig& c, const Discretization& d) : cfg_(c.loading), disc_(d) {
    const BoundarySet& fixed = d.mesh.set(cfg_.fixed);
    const int dim = d.dim;
    for (int n : fixed.nodes) {
      fixed_.push_back(dim * n);
      if (dim == 2 && cfg_.fix_all_components) fixed_.push_back(dim * n + 1);
    }
    if (dim == 2 && !cfg_.fix_all_components && !fixed.nodes.empty()) {
      // one y constraint against rigid sliding
      std::array<double, 2> c0{0.0, 0.0};
      for (int n : fixed.nodes) { c0[0] += d.mesh.nodes[n][0]; c0[1] += d.mesh.nodes[n][1]; }
      c0[0] /= fixed.nodes.size(); c0[1] /= fixed.nodes.size();
      fixed_.push_back(dim * nearest_node(d.mesh, c0, &fixed.nodes) + 1);
    }
    boundary_ = d.mesh.set(cfg_.boundary).nodes;
    if (cfg_.control == LoadControl::Force) {
      const double meas = boundary_measure(d, cfg_.boundary);
      unit_ = boundary_load(d, cfg_.boundary, {cfg_.per_area ? 1.0 : 1.0 / meas, 0.0});
    }
    if (cfg_.turnaround_time) t_turn_ = *cfg_.turnaround_time;
  }

  double value(double t) const {
    switch (cfg_.program) {
      case LoadProgram::StepForce: return t > 0.0 ? cfg_.magnitude : 0.0;
      case LoadProgram::ForceRamp:
      case LoadProgram::DisplacementRamp: return cfg_.rate * t;
      case LoadProgram::LoadUnload:
        if (t <= t_turn_) return cfg_.rate * t;
        return std::max(0.0, cfg_.rate * (2.0 * t_turn_ - t));
    }
    return 0.0;
  }

  LoadState at(double t) const {
    LoadState s;
    for (int dof : fixed_) s.prescribed.emplace_back(dof, 0.0);
    const double v = value(t);
    if (cfg_.control == LoadControl::Displacement) {
      for (int n : boundary_) s.prescribed.emplace_back(disc_.dim * n, v);
    } else if (unit_.size() > 0) {
      s.external = unit_ * v;
    }
    s.body = cfg_.body;
    return s;
  }

  // Returns true when the program is finished.
  bool after_step(double t, double strain, double stress) {
    if (cfg_.program != LoadProgram::LoadUnload) return false;
    if (!unloading_ && cfg_.turnaround_strain_pct && strain * 100.0 >= *cfg_.turnaround_strain_pct) t_turn_ = t;
    if (t >= t_turn_) unloading_ = true;
    if (!unloading_ || t <= t_turn_) return false;
    if (value(t) <= 0.0) return true;
    return cfg_.control == LoadControl::Displacement && stress <= 0.0;
  }

 private:
  LoadingConfig cfg_;
  const Discretization& disc_;
  std::vector<int> fixed_;
  std::vector<int> boundary_;
  Eigen::VectorXd unit_;
  double t_turn_ = std::numeric_limits<double>::infinity();
  bool unloading_ = false;
};

int probe_qp(const ScenarioConfig& c, const Simulation& sim) {
  const auto& o = c.output;
  if (o.probe_point) {
    int best = 0;
    double bd = std::numeric_limits<double>::infinity();
    for (int i = 0; i < sim.num_qp(); ++i) {
      const auto x = sim.qp_position(i);
      const double d = std::hypot(x[0] - (*o.probe_point)[0], x[1] - (*o.probe_point)[1]);
      if (d < bd - 1e-15) { bd = d; best = i; }
    }
    return best;
  }
  const auto& disc = sim.disc();
  const int ne = static_cast<int>(disc.geo.size());
  const int e = o.probe_element < 0 ? ne + o.probe_element : o.probe_element;
  if (e < 0 || e >= ne) throw ConfigError("output.probe_element out of range");
  const int nq = static_cast<int>(disc.geo[e].size());
  const int q = o.probe_qp < 0 ? nq + o.probe_qp : o.probe_qp;
  if (q < 0 || q >= nq) throw ConfigError("output.probe_qp out of range");
  return disc.qp_offset[e] + q;
}

int probe_node(const ScenarioConfig& c, const Discretization& d) {
  if (c.output.probe_node) return nearest_node(d.mesh, *c.output.probe_node);
  const auto& nodes = d.mesh.set(c.loading.boundary).nodes;
  if (nodes.empty()) throw ConfigError("loading boundary set is empty");
  std::array<double, 2> c0{0.0, 0.0};
  for (int n : nodes) { c0[0] += d.mesh.nodes[n][0]; c0[1] += d.mesh.nodes[n][1]; }
  c0[0] /= nodes.size(); c0[1] /= nodes.size();
  return nearest_node(d.mesh, c0, &nodes);
}

std::vector<SymTensor2<double>> cell_stress(const Simulation& sim) {
  const auto& disc = sim.disc();
  std::vector<SymTensor2<double>> out;
  for (std::size_t e = 0; e < disc.geo.size(); ++e) {
    SymTensor2<double> s(disc.dim);
    const int nq = static_cast<int>(disc.geo[e].size());
    for (int q = 0; q < nq; ++q) s += sim.qp(disc.qp_offset[e] + q).S * (1.0 / nq);
    out.push_back(s);
  }
  return out;
}

}  // namespace

RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt) {
  Discretization disc(build_mesh(cfg.geometry), cfg.geometry.thickness);
  Simulation sim(std::move(disc), cfg.material, cfg.solver, cfg.dt);
  if (cfg.initial_damage > 0.0)
    sim.set_initial_damage(Eigen::VectorXd::Constant(static_cast<Eigen::Index>(sim.disc().mesh.num_nodes()),
                                                     cfg.initial_damage));
  LoadDriver driver(cfg, sim.disc());
  const int pq = probe_qp(cfg, sim);
  const int pn = probe_node(cfg, sim.disc());

  RunResult res;
  for (const char* n : {"time", "load", "displacement", "strain", "stress", "damage", "psi_m", "R", "phi_max"})
    res.series.add_channel(n);
  RunStats& st = res.stats;
  st.min_psi_m = std::numeric_limits<double>::infinity();
  st.min_R = std::numeric_limits<double>::infinity();

  if (opt.write_outputs) std::filesystem::create_directories(cfg.output.directory);
  const LoadFn loads = [&](double t) { return driver.at(t); };
  const double t_stop = cfg.t_end * (1.0 + 1e-12);
  while (sim.time() + sim.dt() <= t_stop) {
    Eigen::VectorXd phi_prev = sim.phi();
    StepReport rep = sim.step(loads);
    st.halvings += rep.halvings;
    ++st.steps;
    if (phi_prev.size() > 0) st.max_phi_decrease = std::max(st.max_phi_decrease, (phi_prev - sim.phi()).maxCoeff());
    for (int i = 0; i < sim.num_qp(); ++i) {
      st.min_psi_m = std::min(st.min_psi_m, sim.qp(i).psi_m);
      st.min_R = std::min(st.min_R, sim.qp(i).R);
    }
    const QpState& q = sim.qp(pq);
    res.series.push({sim.time(), driver.value(sim.time()), sim.u()[sim.disc().dim * pn], q.E[0], q.S[0],
                     sim.qp_phi(pq), q.psi_m, q.R, sim.phi().maxCoeff()});
    if (opt.observer) opt.observer(sim, rep);
    if (opt.write_outputs && cfg.output.vtk_every > 0 && st.steps % cfg.output.vtk_every == 0)
      write_vtk(sim.disc().mesh, sim.u(), sim.phi(), cell_stress(sim),
                vtk_filename(cfg.output.directory, cfg.name, st.steps));
    if (driver.after_step(sim.time(), q.E[0], q.S[0])) {
      st.program_finished = true;
      break;
    }
    if (opt.stop && opt.stop(res.series)) break;
  }
  if (st.steps == 0) st.min_psi_m = st.min_R = 0.0;
  st.phi_min = sim.phi().size() ? sim.phi().minCoeff() : 0.0;
  st.phi_max = sim.phi().size() ? sim.phi().maxCoeff() : 0.0;
  st.final_dt = sim.dt();
  res.u = sim.u();
  res.phi = sim.phi();
  if (opt.write_outputs) write_csv(res.series, cfg.output.directory + "/" + cfg.output.csv);
  return res;
}

double msd(const std::vector<double>& a, const std::vector<double>& b, Normalization norm) {
  if (a.size() != b.size() || a.empty()) throw std::invalid_argument("msd needs two non-empty sequences of equal length");
  const std::vector<double>& n = norm == Normalization::ByA ? a : b;
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (n[i] == 0.0) throw std::invalid_argument("msd: zero normalizer entry");
    const double r = (a[i] - b[i]) / n[i];
    s += r * r;
  }
  return std::sqrt(s / static_cast<double>(a.size()));
}

StressComparison compare_stress_modes(ScenarioConfig cfg) {
  StressComparison out;
  cfg.solver.mode = StressMode::Complete;
  RunResult c = run_scenario(cfg);
  cfg.solver.mode = StressMode::Partial;
  RunResult p = run_scenario(cfg);
  out.S_c = c.series.column("stress");
  out.S_p = p.series.column("stress");
  if (out.S_c.size() != out.S_p.size()) throw SolverDivergence("partial and complete runs took different step counts");
  out.msd = msd(out.S_c, out.S_p, Normalization::ByA);
  out.strain_pct = 100.0 * c.series.column("strain").back();
  return out;
}

double residual_strain(const TimeSeries& s) {
  const auto& load = s.column("load");
  const auto& stress = s.column("stress");
  const auto& strain = s.column("strain");
  if (load.empty()) return 0.0;
  const std::size_t peak = static_cast<std::size_t>(std::max_element(load.begin(), load.end()) - load.begin());
  for (std::size_t i = peak + 1; i < stress.size(); ++i) {
    if (stress[i] <= 0.0) {
      const double s0 = stress[i - 1], s1 = stress[i];
      const double w = s0 == s1 ? 1.0 : s0 / (s0 - s1);
      return strain[i - 1] + w * (strain[i] - strain[i - 1]);
    }
  }
  return strain.back();
}

double value_at_first_crossing(const TimeSeries& s, const std::string& xs, double x0, const std::string& ys) {
  const auto& x = s.column(xs);
  const auto& y = s.column(ys);
  double xp = 0.0, yp = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i] >= x0) {
      const double w = x[i] == xp ? 1.0 : (x0 - xp) / (x[i] - xp);
      return yp + w * (y[i] - yp);
    }
    xp = x[i];
    yp = y[i];
  }
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace fvd
