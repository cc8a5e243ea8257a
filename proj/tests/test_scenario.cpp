#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "fvd/config.hpp"
#include "fvd/errors.hpp"
#include "fvd/io.hpp"
#include "fvd/scenario.hpp"

using namespace fvd;
using nlohmann::json;

namespace {

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Minimal legacy-VTK reader: section keyword → count, plus the flat numbers after it.
struct VtkFile {
  std::map<std::string, std::size_t> counts;
  std::map<std::string, std::vector<double>> values;
};

VtkFile parse_vtk(const std::string& path) {
  std::ifstream in(path);
  VtkFile v;
  std::string line, current;
  for (int i = 0; i < 4 && std::getline(in, line); ++i) {
  }
  while (std::getline(in, line)) {
    std::stringstream ss(line);
    std::string w;
    ss >> w;
    if (w == "POINTS" || w == "CELLS" || w == "CELL_TYPES" || w == "POINT_DATA" || w == "CELL_DATA") {
      ss >> v.counts[w];
      current = w;
    } else if (w == "VECTORS" || w == "SCALARS") {
      ss >> current;
    } else if (w == "LOOKUP_TABLE") {
    } else {
      std::stringstream all(line);
      for (double x; all >> x;) v.values[current].push_back(x);
    }
  }
  return v;
}

json small_rod() {
  json j = preset_json("rod_1d");
  j["time"]["t_end"] = 0.01;
  j["output"]["directory"] = tmp("fvd_small_rod");
  return j;
}

std::vector<double> swings(const std::vector<double>& x) {
  // peak-to-trough ranges of an oscillation
  std::vector<double> ext;
  for (std::size_t i = 1; i + 1 < x.size(); ++i)
    if ((x[i] > x[i - 1] && x[i] >= x[i + 1]) || (x[i] < x[i - 1] && x[i] <= x[i + 1])) ext.push_back(x[i]);
  std::vector<double> out;
  for (std::size_t i = 1; i < ext.size(); ++i) out.push_back(std::abs(ext[i] - ext[i - 1]));
  return out;
}

}  // namespace

TEST_CASE("msd") {
  CHECK(msd({1, 2, 3}, {1, 2, 3}, Normalization::ByA) == 0.0);
  CHECK(msd({2, 2}, {1, 1}, Normalization::ByA) == doctest::Approx(0.5));
  std::vector<double> a{1.0, -2.0, 4.0}, b{1.5, -2.5, 3.0};
  CHECK(msd(a, b, Normalization::ByA) == msd(b, a, Normalization::ByB));
  CHECK_THROWS(msd({0.0, 1.0}, {1.0, 1.0}, Normalization::ByA));
  CHECK_THROWS(msd({1.0}, {1.0, 1.0}, Normalization::ByA));
  CHECK_THROWS(msd({}, {}, Normalization::ByA));
}

TEST_CASE("time series and CSV round trip") {
  TimeSeries s;
  s.add_channel("time");
  s.add_channel("stress");
  const auto path = tmp("fvd_empty.csv");
  write_csv(s, path);
  CHECK(slurp(path) == "time,stress\n");
  s.push({0.1, 1.0 / 3.0});
  s.push({0.2, -2.5e-7});
  CHECK_THROWS(s.push({0.2, 1.0}));
  CHECK_THROWS(s.push({0.3}));
  write_csv(s, path);
  TimeSeries r = read_csv(path);
  std::remove(path.c_str());
  CHECK(r.names == s.names);
  REQUIRE(r.size() == 2);
  for (std::size_t c = 0; c < 2; ++c)
    for (std::size_t i = 0; i < 2; ++i) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.11e", s.data[c][i]);
      CHECK(r.data[c][i] == std::stod(buf));
    }
  CHECK_THROWS_AS(s.column("strain"), std::invalid_argument);
}

TEST_CASE("VTK output parses back") {
  Mesh m;
  m.kind = ElementKind::Tri3;
  m.nodes = {{0, 0}, {1, 0}, {0, 1}};
  m.elements = {{0, 1, 2}};
  Eigen::VectorXd u(6), phi(3);
  u << 0, 0, 0.1, 0, 0, -0.05;
  phi << 0.0, 0.25, 0.5;
  const auto path = tmp("fvd_tri.vtk");
  write_vtk(m, u, phi, {SymTensor2<double>(2, 3.0, 1.0, 0.0)}, path);
  VtkFile v = parse_vtk(path);
  std::remove(path.c_str());
  CHECK(v.counts["POINTS"] == 3);
  CHECK(v.counts["CELLS"] == 1);
  CHECK(v.values["CELLS"] == std::vector<double>{3, 0, 1, 2});
  CHECK(v.values["CELL_TYPES"] == std::vector<double>{5});
  CHECK(v.values["phi"] == std::vector<double>{0.0, 0.25, 0.5});
  CHECK(v.values["u"].size() == 9);
  CHECK(v.values["u"][3] == doctest::Approx(0.1));
  CHECK(v.values["stress_trace"] == std::vector<double>{4.0});
  CHECK(v.values["stress_von_mises"][0] == doctest::Approx(std::sqrt(7.0)));
  CHECK(vtk_filename("out", "run", 42) == "out/run_000042.vtk");
}

TEST_CASE("every preset parses and builds its mesh") {
  const auto names = preset_names();
  CHECK(names.size() == 7);
  std::map<std::string, std::size_t> elements{{"rod_1d", 30}, {"rod_2d", 30}, {"i_shaped_load_unload", 300},
                                              {"hdpe_small", 2240}};
  for (const auto& n : names) {
    ScenarioConfig c = parse_config(preset_json(n));
    Mesh m = build_mesh(c.geometry);
    CHECK_NOTHROW(m.validate());
    if (elements.count(n)) CHECK(m.num_elements() == elements[n]);
  }
  CHECK_THROWS_AS(preset_json("no_such_preset"), ConfigError);
}

TEST_CASE("config validation and overrides") {
  json j = small_rod();
  apply_override(j, "material.p=2e7");
  apply_override(j, "solver.stress_mode=complete");
  ScenarioConfig c = parse_config(j);
  CHECK(c.material.p == 2e7);
  CHECK(c.solver.mode == StressMode::Complete);
  CHECK_THROWS_AS(apply_override(j, "novalue"), ConfigError);

  json bad = small_rod();
  bad["material"]["youngs"] = 1.0;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = small_rod();
  bad["time"]["dt"] = 0.0;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = small_rod();
  bad["time"]["t_end"] = 1e-6;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = small_rod();
  bad["loading"]["program"] = "wiggle";
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
  bad = small_rod();
  bad["material"]["gc"] = 1.0;
  bad["material"]["f_t"] = 1.0;
  CHECK_THROWS_AS(parse_config(bad), ConfigError);
}

TEST_CASE("zero load keeps every channel at zero") {
  json j = small_rod();
  j["loading"]["magnitude"] = 0.0;
  RunResult r = run_scenario(parse_config(j));
  CHECK(r.series.size() == 100);
  for (const auto& name : r.series.names) {
    if (name == "time" || name == "load") continue;
    for (double x : r.series.column(name)) CHECK(x == 0.0);
  }
}

TEST_CASE("runs are deterministic") {
  json j = small_rod();
  ScenarioConfig c = parse_config(j);
  RunOptions o;
  o.write_outputs = true;
  run_scenario(c, o);
  const std::string first = slurp(c.output.directory + "/" + c.output.csv);
  run_scenario(c, o);
  const std::string second = slurp(c.output.directory + "/" + c.output.csv);
  std::filesystem::remove_all(c.output.directory);
  CHECK(!first.empty());
  CHECK(first == second);
}

TEST_CASE("rod oscillation decays, and faster for larger p") {
  // returns the number of swings; heavy memory damping suppresses ringing
  auto run = [](double p, bool oscillates) {
    json j = preset_json("rod_1d");
    j["material"]["p"] = p;
    j["time"]["t_end"] = 0.05;
    RunResult r = run_scenario(parse_config(j));
    const auto& x = r.series.column("displacement");
    if (oscillates) {
      auto s = swings(x);
      REQUIRE(s.size() >= 4);
      for (std::size_t i = 1; i < s.size(); ++i) CHECK(s[i] <= s[i - 1] * (1.0 + 1e-9));
    }
    CHECK(r.stats.min_psi_m >= 0.0);
    CHECK(r.stats.min_R >= 0.0);
    return swings(x).size();
  };
  const std::size_t low = run(21.46e6, true), high = run(214.6e6, false);
  CHECK(high < low);
}

TEST_CASE("partial and complete stress agree exactly for the constant tensor") {
  json j = preset_json("rod_1d_stress_terms");
  j["time"]["t_end"] = 0.005;
  j["loading"]["magnitude"] = 2e3;
  j["material"]["memory_tensor"] = "A2";
  StressComparison c = compare_stress_modes(parse_config(j));
  CHECK(c.msd == 0.0);
  j["material"]["memory_tensor"] = "A1";
  c = compare_stress_modes(parse_config(j));
  CHECK(c.msd > 0.0);
  CHECK(c.msd < 1e-2);
  CHECK(c.strain_pct > 0.0);
}

TEST_CASE("residual strain and crossings of a series") {
  TimeSeries s;
  for (const char* n : {"time", "load", "strain", "stress"}) s.add_channel(n);
  s.push({1, 1, 0.01, 10});
  s.push({2, 2, 0.02, 20});
  s.push({3, 1, 0.015, 5});
  s.push({4, 0, 0.01, -5});
  CHECK(residual_strain(s) == doctest::Approx(0.0125));
  CHECK(value_at_first_crossing(s, "strain", 0.015, "stress") == doctest::Approx(15.0));
  CHECK(std::isnan(value_at_first_crossing(s, "strain", 0.5, "stress")));
}
