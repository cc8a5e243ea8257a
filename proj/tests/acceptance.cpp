// Acceptance checks: one PASS/FAIL line per criterion, tolerances fixed below.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "fvd/config.hpp"
#include "fvd/errors.hpp"
#include "fvd/fractional.hpp"
#include "fvd/material.hpp"
#include "fvd/scenario.hpp"
#include "fvd/simulation.hpp"

using namespace fvd;
using nlohmann::json;

namespace {

// tolerances
constexpr double kCaputoRel = 0.01;
constexpr double kCoeffRel = 1e-12;
constexpr double kTangentFdRel = 1e-5;
constexpr double kTangentRefRel = 1e-10;
constexpr double kStrainPp = 0.5;
constexpr double kStressMsdMax = 1e-4;
constexpr double kMsdFactor = 3.0;
constexpr double kRodMsdMax = 1e-4;
constexpr double kQuiet = 1e-12;
constexpr double kPatchRel = 1e-6;

struct Outcome {
  bool pass = false;
  std::string detail;
};

// sign diagnostics gathered from every run in this binary
double g_min_psi = std::numeric_limits<double>::infinity();
double g_min_R = std::numeric_limits<double>::infinity();
int g_runs = 0;

RunResult run(const ScenarioConfig& c, const RunOptions& o = {}) {
  RunResult r = run_scenario(c, o);
  g_min_psi = std::min(g_min_psi, r.stats.min_psi_m);
  g_min_R = std::min(g_min_R, r.stats.min_R);
  ++g_runs;
  return r;
}

std::string fmt(const char* f, double a) {
  char b[64];
  std::snprintf(b, sizeof b, f, a);
  return b;
}

void coarse_hdpe(json& j) {
  j["geometry"]["grip_div"] = 8;
  j["geometry"]["shoulder_div"] = 4;
  j["geometry"]["gauge_width_div"] = 4;
  j["geometry"]["gauge_div"] = 16;
  j["time"]["dt"] = 0.5;
}

// ---- 1
Outcome caputo_oracle() {
  std::ostringstream s;
  bool ok = true;
  double worst = 0.0;
  for (double a : {0.3, 0.5, 0.7}) {
    for (int pw : {1, 2}) {
      const double exact = std::tgamma(pw + 1.0) / std::tgamma(pw + 1.0 - a);
      double prev = std::numeric_limits<double>::infinity();
      for (std::size_t n : {125, 250, 500, 1000, 2000}) {
        StrainHistory h(1, 1.0 / static_cast<double>(n));
        for (std::size_t i = 1; i <= n; ++i) h.append(SymTensor2<double>(1, std::pow(static_cast<double>(i) / n, pw)));
        const double err = std::abs(caputo_g1(h, a)[0] - exact) / exact;
        if (err >= prev) ok = false;
        if (n == 1000) {
          worst = std::max(worst, err);
          if (err > kCaputoRel) ok = false;
        }
        prev = err;
      }
    }
  }
  s << "worst relative error at N = 1000: " << worst;
  return {ok, s.str()};
}

// ---- 2
Outcome coefficients() {
  double worst = 0.0;
  for (double a : {0.1, 0.5, 0.9}) {
    auto c = g1_coefficients(a, 10000);
    for (std::size_t m = 0; m < 10000; ++m) {
      const double r = g1_coefficient_closed_form(a, m);
      worst = std::max(worst, std::abs(c[m] - r) / std::abs(r));
    }
  }
  return {worst <= kCoeffRel, "worst relative difference " + fmt("%.3e", worst)};
}

// ---- 3
Outcome tangent() {
  std::mt19937 rng(2024);
  std::uniform_real_distribution<double> U(-0.05, 0.05), Ua(0.1, 0.9), Uphi(0.0, 0.9);
  double worst_fd = 0.0;
  for (int k = 0; k < 100; ++k) {
    MaterialParams m;
    m.E_Y = 2e9;
    m.nu = 0.3;
    m.p = 5e7;
    m.alpha = Ua(rng);
    m.plane = k % 2 ? Plane::Stress : Plane::Strain;
    m.memory = k % 3 ? MemoryTensor::A1 : MemoryTensor::A2;
    m.finalize();
    const StressMode mode = k % 4 < 2 ? StressMode::Partial : StressMode::Complete;
    StrainHistory h(2, 1e-3);
    for (int i = 1; i < 40; ++i) h.append(SymTensor2<double>(2, 0.001 * i + 0.4 * U(rng), 0.4 * U(rng), 0.4 * U(rng)));
    G1Coefficients c(m.alpha, 64);
    HistoryDigest d = digest_history(h, c, true);
    PointState st;
    st.memory = &d;
    st.phi = Uphi(rng);
    SymTensor2<double> E(2, U(rng), U(rng), U(rng));
    auto D = tangent_stiffness(E, st, m, mode);
    double scale = 0.0;
    for (int p = 0; p < 3; ++p)
      for (int q = 0; q < 3; ++q) scale = std::max(scale, std::abs(D(p, q)));
    const double hh = 1e-6;
    for (int q = 0; q < 3; ++q) {
      SymTensor2<double> ep = E, em = E;
      // shear column is with respect to the engineering shear
      ep[q] += q == 2 ? 0.5 * hh : hh;
      em[q] -= q == 2 ? 0.5 * hh : hh;
      auto sp = second_piola(ep, st, m, mode), sm = second_piola(em, st, m, mode);
      for (int p = 0; p < 3; ++p) worst_fd = std::max(worst_fd, std::abs(D(p, q) - (sp[p] - sm[p]) / (2 * hh)) / scale);
    }
  }
  double worst_ref = 0.0;
  for (Plane pl : {Plane::Strain, Plane::Stress, Plane::Uniaxial}) {
    MaterialParams m;
    m.E_Y = 2e9;
    m.nu = 0.3;
    m.plane = pl;
    m.finalize();
    const int dim = m.dim();
    auto D = tangent_stiffness(SymTensor2<double>(dim), PointState{}, m, StressMode::Partial);
    const double l = m.lambda_eff(), mu = m.mu, s = l + 2 * mu;
    worst_ref = std::max(worst_ref, std::abs(D(0, 0) - s) / s);
    if (dim == 2) {
      worst_ref = std::max(worst_ref, std::abs(D(1, 1) - s) / s);
      worst_ref = std::max(worst_ref, std::abs(D(0, 1) - l) / s);
      worst_ref = std::max(worst_ref, std::abs(D(1, 0) - l) / s);
      worst_ref = std::max(worst_ref, std::abs(D(2, 2) - mu) / s);
      worst_ref = std::max(worst_ref, std::abs(D(0, 2)) / s);
    }
  }
  return {worst_fd <= kTangentFdRel && worst_ref <= kTangentRefRel,
          "vs finite differences " + fmt("%.2e", worst_fd) + ", vs reference tensor " + fmt("%.2e", worst_ref)};
}

// ---- 4
Outcome stress_terms() {
  const double forces[] = {200e3, 400e3, 800e3, 1000e3};
  const double strain_ref[] = {2.92, 6.30, 15.07, 21.02};
  const double msd_ref[] = {2.6615e-6, 5.3166e-6, 10.664e-6, 13.498e-6};
  bool ok = true;
  std::ostringstream s;
  for (int i = 0; i < 4; ++i) {
    json j = preset_json("rod_1d_stress_terms");
    j["loading"]["magnitude"] = forces[i];
    s << "\n    F = " << forces[i] / 1e3 << " kN: ";
    try {
      StressComparison c = compare_stress_modes(parse_config(j));
      g_runs += 2;
      const bool row = std::abs(c.strain_pct - strain_ref[i]) <= kStrainPp && c.msd <= kStressMsdMax &&
                       c.msd <= kMsdFactor * msd_ref[i] && c.msd >= msd_ref[i] / kMsdFactor;
      ok = ok && row;
      s << "strain " << fmt("%.3f", c.strain_pct) << "% (ref " << strain_ref[i] << "%), msd " << fmt("%.3e", c.msd)
        << " (ref " << fmt("%.3e", msd_ref[i]) << ")";
    } catch (const std::exception& e) {
      ok = false;
      s << "run failed: " << e.what();
    }
  }
  return {ok, s.str()};
}

// ---- 5
Outcome rod_consistency() {
  json j1 = preset_json("rod_1d");
  j1["material"]["p"] = 214.6e6;
  json j2 = preset_json("rod_2d");
  RunResult a = run(parse_config(j1));
  RunResult b = run(parse_config(j2));
  const double m = msd(a.series.column("displacement"), b.series.column("displacement"), Normalization::ByB);
  return {m <= kRodMsdMax, "displacement msd " + fmt("%.4e", m)};
}

// ---- 6
Outcome hysteresis() {
  std::vector<double> res;
  std::ostringstream s;
  for (double a : {0.2, 0.7}) {
    json j = preset_json("i_shaped_load_unload");
    j["geometry"]["grip_div"] = 5;
    j["geometry"]["shoulder_div"] = 2;
    j["geometry"]["gauge_width_div"] = 2;
    j["geometry"]["gauge_div"] = 8;
    j["material"]["alpha"] = a;
    RunResult r = run(parse_config(j));
    res.push_back(residual_strain(r.series));
    s << "alpha " << a << ": residual strain " << fmt("%.4e", res.back()) << "  ";
  }
  return {res[1] > res[0], s.str()};
}

// ---- 7
Outcome irreversibility() {
  json j = preset_json("hdpe_small");
  coarse_hdpe(j);
  RunResult r = run(parse_config(j));
  const auto& st = r.stats;
  const bool ok = st.max_phi_decrease <= 0.0 && st.phi_min >= 0.0 && st.phi_max <= 1.0 && st.program_finished;
  std::ostringstream s;
  s << st.steps << " steps, largest nodal decrease " << st.max_phi_decrease << ", final phi in [" << st.phi_min << ", "
    << st.phi_max << "], program " << (st.program_finished ? "completed" : "not completed");
  return {ok, s.str()};
}

// ---- 8 (after every other run, plus a short run of each preset)
Outcome signs() {
  std::ostringstream s;
  for (const std::string& n : preset_names()) {
    json j = preset_json(n);
    const double dt = j["time"]["dt"].get<double>();
    j["time"]["t_end"] = 20 * dt;
    if (j["loading"]["program"] == "step_force" && n == "rod_1d_stress_terms") j["loading"]["magnitude"] = 20e3;
    try {
      run(parse_config(j));
    } catch (const std::exception& e) {
      s << n << " short run failed: " << e.what() << "; ";
    }
  }
  const bool ok = g_min_psi >= 0.0 && g_min_R >= 0.0 && s.str().empty();
  s << g_runs << " runs, min psi_m " << g_min_psi << ", min R " << g_min_R;
  return {ok, s.str()};
}

// ---- 9
Outcome degradation_contract() {
  bool ok = true;
  std::ostringstream s;
  for (auto kind : {DegradationKind::G1, DegradationKind::G2}) {
    MaterialParams m;
    m.degradation = kind;
    m.a = 3.8;
    m.b = 1.5;
    m.c = 1.15;
    m.finalize();
    ok = ok && degradation(0.0, m).G == 1.0 && degradation(1.0, m).G == 0.0;
    for (int i = 0; i < 100000; ++i) ok = ok && degradation(i / 100000.0, m).G > 0.0;
  }
  MaterialParams m;
  m.degradation = DegradationKind::G2;
  m.finalize();
  // slope magnitude shrinks as ε^{d−1} toward a zero limit
  double prev = std::numeric_limits<double>::infinity();
  s << "|G2'(1-eps)|:";
  for (double eps : {1e-3, 1e-4, 1e-5, 1e-6}) {
    const double g = std::abs(degradation(1.0 - eps, m).dG);
    ok = ok && g < prev;
    s << " " << fmt("%.4f", g);
    prev = g;
  }
  const double r = std::abs(degradation(1.0 - 1e-6, m).dG) / std::abs(degradation(1.0 - 1e-3, m).dG);
  ok = ok && std::abs(r / std::pow(1e-3, m.d - 1.0) - 1.0) < 0.05 && degradation(1.0, m).dG == 0.0;
  s << ", G2'(1) = " << degradation(1.0, m).dG;
  return {ok, s.str()};
}

// ---- 10
Outcome hdpe_degradation() {
  std::ostringstream s;
  double at10[2];
  int i = 0;
  for (const char* kind : {"G2", "G1"}) {
    json j = preset_json("hdpe_large");
    coarse_hdpe(j);
    j["material"]["degradation"] = kind;
    RunOptions o;
    o.stop = [](const TimeSeries& ts) { return ts.column("strain").back() > 0.102; };
    RunResult r = run(parse_config(j), o);
    at10[i] = value_at_first_crossing(r.series, "strain", 0.10, "stress");
    s << kind << ": stress at 10% strain " << fmt("%.4e", at10[i]) << " Pa  ";
    ++i;
  }
  const double ratio = at10[0] / at10[1];
  s << "ratio " << fmt("%.3f", ratio) << " (need > 2)";
  return {ratio > 2.0, s.str()};
}

// ---- 11
LoadFn end_force(const Discretization& d, double F, bool fix_all) {
  Eigen::VectorXd f = boundary_load(d, "right", {F / boundary_measure(d, "right"), 0.0});
  std::vector<int> fixed;
  for (int n : d.mesh.set("left").nodes) {
    fixed.push_back(d.dim * n);
    if (d.dim == 2 && fix_all) fixed.push_back(d.dim * n + 1);
  }
  if (d.dim == 2 && !fix_all) fixed.push_back(d.dim * d.mesh.set("left").nodes.front() + 1);
  return [=](double) {
    LoadState s;
    for (int k : fixed) s.prescribed.emplace_back(k, 0.0);
    s.external = f;
    return s;
  };
}

double golden_min(const std::function<double(double)>& f, double a, double b, int iters) {
  const double g = 0.5 * (std::sqrt(5.0) - 1.0);
  double c = b - g * (b - a), d = a + g * (b - a);
  double fc = f(c), fd = f(d);
  for (int i = 0; i < iters; ++i) {
    if (fc < fd) {
      b = d; d = c; fd = fc;
      c = b - g * (b - a); fc = f(c);
    } else {
      a = c; c = d; fc = fd;
      d = a + g * (b - a); fd = f(d);
    }
  }
  return 0.5 * (a + b);
}

Outcome quiescence_and_patch() {
  double worst_rest = 0.0;
  for (auto kind : {ElementKind::Bar2, ElementKind::Tri3, ElementKind::Quad4, ElementKind::Quad8}) {
    Mesh mesh = kind == ElementKind::Bar2 ? make_bar(1.0, 10) : make_rectangle(1.0, 0.2, 5, 2, kind);
    Discretization d(mesh, 0.01);
    MaterialParams m;
    m.plane = d.dim == 1 ? Plane::Uniaxial : Plane::Strain;
    m.finalize();
    Simulation sim(d, m, SolverSettings{}, 1e-3);
    LoadFn none = [](double) { return LoadState{}; };
    for (int i = 0; i < 100; ++i) sim.step(none);
    worst_rest = std::max({worst_rest, sim.u().lpNorm<Eigen::Infinity>(), sim.phi().lpNorm<Eigen::Infinity>()});
  }

  SolverSettings st;
  st.inertia = false;
  st.damage_enabled = false;
  st.motion = {1e-13, 50, 1e-14};
  double worst_patch = 0.0;
  // one bar element, both laws
  for (auto law : {ElasticLaw::LinearSpring, ElasticLaw::NeoHookean}) {
    Discretization d(make_bar(0.5, 1), 2e-4);
    MaterialParams m;
    m.E_Y = 3e9;
    m.nu = 0.25;
    m.plane = Plane::Uniaxial;
    m.law = law;
    m.memory_enabled = false;
    m.finalize();
    const double F = 4e4;
    Simulation sim(d, m, st, 1.0);
    sim.step(end_force(d, F, true));
    auto Pi = [&](double u) {
      const double g = u / 0.5, E = g + 0.5 * g * g;
      return 2e-4 * 0.5 * elastic_energy(SymTensor2<double>(1, E), m) - F * u;
    };
    const double ref = golden_min(Pi, 0.0, 0.1, 200);
    worst_patch = std::max(worst_patch, std::abs(sim.u()[1] - ref) / ref);
  }
  // one quad element in homogeneous stretch
  {
    Discretization d(make_rectangle(1.0, 0.5, 1, 1, ElementKind::Quad4), 0.01);
    MaterialParams m;
    m.E_Y = 1e8;
    m.nu = 0.3;
    m.plane = Plane::Strain;
    m.memory_enabled = false;
    m.finalize();
    const double F = 2e4, V = 1.0 * 0.5 * 0.01;
    Simulation sim(d, m, st, 1.0);
    sim.step(end_force(d, F, false));
    auto Pi = [&](double a, double b) {
      return V * elastic_energy(SymTensor2<double>(2, a + 0.5 * a * a, b + 0.5 * b * b, 0.0), m) - F * a;
    };
    auto best_b = [&](double a) { return golden_min([&](double b) { return Pi(a, b); }, -0.5, 0.5, 120); };
    const double a = golden_min([&](double x) { return Pi(x, best_b(x)); }, 0.0, 0.5, 120);
    for (int n : d.mesh.set("right").nodes) worst_patch = std::max(worst_patch, std::abs(sim.u()[2 * n] - a) / a);
  }
  return {worst_rest <= kQuiet && worst_patch <= kPatchRel,
          "max rest motion " + fmt("%.2e", worst_rest) + ", patch relative error " + fmt("%.2e", worst_patch)};
}

}  // namespace

int main() {
  struct Item {
    int id;
    const char* name;
    std::function<Outcome()> check;
  };
  // 8 runs last so that it sees every other run
  const std::vector<Item> items{
      {1, "fractional derivative oracle", caputo_oracle},
      {2, "G1 coefficients", coefficients},
      {3, "tangent consistency", tangent},
      {4, "complete vs partial stress study", stress_terms},
      {5, "1D/2D rod consistency", rod_consistency},
      {6, "hysteresis grows with alpha", hysteresis},
      {7, "damage irreversibility", irreversibility},
      {9, "degradation contract", degradation_contract},
      {10, "HDPE degradation comparison", hdpe_degradation},
      {11, "quiescence and patch tests", quiescence_and_patch},
      {8, "thermodynamic signs", signs},
  };
  std::vector<std::string> lines(12);
  int failed = 0;
  for (const auto& it : items) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = it.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failed;
    std::ostringstream l;
    l << "criterion " << it.id << " " << (o.pass ? "PASS" : "FAIL") << " [" << it.name << "] " << o.detail << " ("
      << fmt("%.1f", sec) << " s)";
    lines[it.id] = l.str();
    std::printf("%s\n", l.str().c_str());
    std::fflush(stdout);
  }
  std::printf("\nsummary\n");
  for (int i = 1; i <= 11; ++i) std::printf("%s\n", lines[i].c_str());
  std::printf("%d of 11 criteria failed\n", failed);
  return failed == 0 ? 0 : 1;
}
