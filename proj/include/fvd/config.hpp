#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "fvd/material.hpp"
#include "fvd/mesh.hpp"
#include "fvd/simulation.hpp"

namespace fvd {

struct GeometryConfig {
  std::string type = "bar";  // bar | rectangle | specimen | file
  ElementKind element = ElementKind::Bar2;
  double length = 1.0;
  double height = 0.1;
  int nx = 10, ny = 1;
  SpecimenShape specimen;
  std::string path;
  double thickness = 1.0;  // cross-section area in 1D
};

enum class LoadProgram { StepForce, ForceRamp, DisplacementRamp, LoadUnload };
enum class LoadControl { Force, Displacement };

struct LoadingConfig {
  LoadProgram program = LoadProgram::StepForce;
  LoadControl control = LoadControl::Force;
  std::string boundary = "right";
  std::string fixed = "left";
  bool fix_all_components = true;  // false: only x fixed on the clamped set
  double magnitude = 0.0;          // step force (N, or Pa when per_area)
  double rate = 0.0;               // N/s, Pa/s or m/s
  bool per_area = false;
  std::optional<double> turnaround_time;
  std::optional<double> turnaround_strain_pct;
  std::array<double, 2> body{0.0, 0.0};
};

struct OutputConfig {
  std::optional<std::array<double, 2>> probe_point;  // nearest quadrature point
  int probe_element = -1;                             // used when no probe_point; negative counts from the end
  int probe_qp = -1;
  std::optional<std::array<double, 2>> probe_node;    // displacement channel; default: first node of `boundary`
  std::string directory = "output";
  std::string csv = "series.csv";
  int vtk_every = 0;  // 0: no field snapshots
};

struct ScenarioConfig {
  std::string name = "scenario";
  GeometryConfig geometry;
  MaterialParams material;
  double dt = 1e-3;
  double t_end = 1e-2;
  double beta = 0.25;
  bool quasi_static = false;
  LoadingConfig loading;
  SolverSettings solver;
  OutputConfig output;
  double initial_damage = 0.0;
};

ScenarioConfig parse_config(const nlohmann::json& j);
ScenarioConfig load_config(const std::string& path);
nlohmann::json read_json_file(const std::string& path);

// "a.b.c=value": value parsed as JSON when possible, otherwise kept as a string.
void apply_override(nlohmann::json& j, const std::string& assignment);

std::vector<std::string> preset_names();
nlohmann::json preset_json(const std::string& name);

Mesh build_mesh(const GeometryConfig& g);

}  // namespace fvd
