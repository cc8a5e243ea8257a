#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fvd/config.hpp"
#include "fvd/io.hpp"
#include "fvd/simulation.hpp"

namespace fvd {

struct RunStats {
  int steps = 0;
  int halvings = 0;
  double min_psi_m = 0.0;       // over every qp of every accepted step
  double min_R = 0.0;
  double max_phi_decrease = 0.0;  // max over steps and nodes of φ_n − φ_{n+1}
  double phi_min = 0.0, phi_max = 0.0;
  bool program_finished = false;  // the loading program asked to stop before t_end
  double final_dt = 0.0;
};

struct RunOptions {
  bool write_outputs = false;  // CSV + VTK per the output plan
  std::function<void(const Simulation&, const StepReport&)> observer;
  // checked after every step; true ends the run early
  std::function<bool(const TimeSeries&)> stop;
};

struct RunResult {
  TimeSeries series;
  RunStats stats;
  Eigen::VectorXd u, phi;
};

// Channels: time, load, displacement, strain, stress, damage, psi_m, R, phi_max.
// Throws SolverDivergence when a step cannot be completed.
RunResult run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {});

enum class Normalization { ByA, ByB };
double msd(const std::vector<double>& a, const std::vector<double>& b, Normalization norm);

struct StressComparison {
  double msd = 0.0;
  double strain_pct = 0.0;
  std::vector<double> S_c, S_p;
};
StressComparison compare_stress_modes(ScenarioConfig cfg);

// Probe strain where the probe stress first reaches zero after the load peak;
// the last strain if it never does.
double residual_strain(const TimeSeries& s);

// Linear interpolation of channel y at the first crossing of x = x0 (loading branch).
// Returns NaN when x never reaches x0.
double value_at_first_crossing(const TimeSeries& s, const std::string& x, double x0, const std::string& y);

}  // namespace fvd
