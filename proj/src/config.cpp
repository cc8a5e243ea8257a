#include "fvd/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include "fvd/errors.hpp"

namespace fvd {

namespace detail {
const std::map<std::string, std::string>& preset_sources();
}

using nlohmann::json;

namespace {

void only_keys(const json& j, const std::string& where, std::initializer_list<const char*> keys) {
  if (!j.is_object()) throw ConfigError("'" + where + "' must be an object");
  std::set<std::string> ok(keys.begin(), keys.end());
  for (auto it = j.begin(); it != j.end(); ++it)
    if (!ok.count(it.key())) throw ConfigError("unknown key '" + where + "." + it.key() + "'");
}

template <class T> void get(const json& j, const char* key, T& out) {
  if (!j.contains(key)) return;
  try {
    out = j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ConfigError(std::string("bad value for '") + key + "': " + e.what());
  }
}

std::array<double, 2> get_pair(const json& j, const char* key) {
  const json& v = j.at(key);
  if (!v.is_array() || v.size() < 1 || v.size() > 2) throw ConfigError(std::string("'") + key + "' must be [x] or [x, y]");
  return {v[0].get<double>(), v.size() > 1 ? v[1].get<double>() : 0.0};
}

GeometryConfig parse_geometry(const json& j) {
  only_keys(j, "geometry", {"type", "element", "length", "height", "nx", "ny", "elements", "path", "thickness",
                            "area", "grip_length", "grip_width", "gauge_length", "gauge_width", "grip_div",
                            "gauge_div", "gauge_width_div", "shoulder_div"});
  GeometryConfig g;
  get(j, "type", g.type);
  if (g.type == "bar") g.element = ElementKind::Bar2;
  if (j.contains("element")) g.element = element_kind_from_string(j.at("element").get<std::string>());
  get(j, "length", g.length);
  get(j, "height", g.height);
  get(j, "nx", g.nx);
  get(j, "elements", g.nx);
  get(j, "ny", g.ny);
  get(j, "path", g.path);
  get(j, "thickness", g.thickness);
  get(j, "area", g.thickness);
  auto& s = g.specimen;
  get(j, "grip_length", s.grip_length);
  get(j, "grip_width", s.grip_width);
  get(j, "gauge_length", s.gauge_length);
  get(j, "gauge_width", s.gauge_width);
  get(j, "grip_div", s.grip_div);
  get(j, "gauge_div", s.gauge_div);
  get(j, "gauge_width_div", s.gauge_width_div);
  get(j, "shoulder_div", s.shoulder_div);
  if (g.type != "bar" && g.type != "rectangle" && g.type != "specimen" && g.type != "file")
    throw ConfigError("unknown geometry type '" + g.type + "'");
  return g;
}

MaterialParams parse_material(const json& j) {
  only_keys(j, "material", {"E_Y", "nu", "p", "alpha", "b_tilde", "c_lambda", "zeta", "delta_tilde", "gc", "f_t",
                            "gamma", "rho", "theta0", "degradation", "G2", "plane", "memory_tensor", "elastic_law",
                            "memory"});
  MaterialParams m;
  get(j, "E_Y", m.E_Y);
  get(j, "nu", m.nu);
  get(j, "p", m.p);
  get(j, "alpha", m.alpha);
  get(j, "b_tilde", m.b_tilde);
  get(j, "c_lambda", m.c_lambda);
  get(j, "zeta", m.zeta);
  get(j, "delta_tilde", m.delta_tilde);
  get(j, "gamma", m.gamma);
  get(j, "rho", m.rho);
  get(j, "theta0", m.theta0);
  get(j, "memory", m.memory_enabled);
  if (j.contains("gc") && j.contains("f_t")) throw ConfigError("give either material.gc or material.f_t, not both");
  get(j, "gc", m.gc);
  if (j.contains("f_t")) m.gc = gc_from_toughness(j.at("f_t").get<double>(), m.nu, m.E_Y);
  if (j.contains("degradation")) {
    const auto s = j.at("degradation").get<std::string>();
    if (s == "G1") m.degradation = DegradationKind::G1;
    else if (s == "G2") m.degradation = DegradationKind::G2;
    else throw ConfigError("material.degradation must be G1 or G2");
  }
  if (j.contains("G2")) {
    const json& g = j.at("G2");
    only_keys(g, "material.G2", {"a", "b", "c"});
    get(g, "a", m.a);
    get(g, "b", m.b);
    get(g, "c", m.c);
  }
  if (j.contains("plane")) {
    const auto s = j.at("plane").get<std::string>();
    if (s == "uniaxial") m.plane = Plane::Uniaxial;
    else if (s == "strain") m.plane = Plane::Strain;
    else if (s == "stress") m.plane = Plane::Stress;
    else throw ConfigError("material.plane must be uniaxial, strain or stress");
  }
  if (j.contains("memory_tensor")) {
    const auto s = j.at("memory_tensor").get<std::string>();
    if (s == "A1") m.memory = MemoryTensor::A1;
    else if (s == "A2") m.memory = MemoryTensor::A2;
    else if (s == "scalar") m.memory = MemoryTensor::Scalar;
    else throw ConfigError("material.memory_tensor must be A1, A2 or scalar");
  }
  if (j.contains("elastic_law")) {
    const auto s = j.at("elastic_law").get<std::string>();
    if (s == "neo_hookean") m.law = ElasticLaw::NeoHookean;
    else if (s == "linear_spring") m.law = ElasticLaw::LinearSpring;
    else throw ConfigError("material.elastic_law must be neo_hookean or linear_spring");
  }
  m.finalize();
  return m;
}

LoadingConfig parse_loading(const json& j) {
  only_keys(j, "loading", {"program", "control", "boundary", "fixed", "fixed_components", "magnitude", "rate",
                           "per_area", "turnaround_time", "turnaround_strain_pct", "body_force"});
  LoadingConfig l;
  const std::string prog = j.value("program", std::string("step_force"));
  if (prog == "step_force") l.program = LoadProgram::StepForce;
  else if (prog == "force_ramp") l.program = LoadProgram::ForceRamp;
  else if (prog == "displacement_ramp") l.program = LoadProgram::DisplacementRamp;
  else if (prog == "load_unload") l.program = LoadProgram::LoadUnload;
  else throw ConfigError("unknown loading.program '" + prog + "'");
  const std::string ctl = j.value("control", std::string(l.program == LoadProgram::DisplacementRamp ? "displacement" : "force"));
  if (ctl == "force") l.control = LoadControl::Force;
  else if (ctl == "displacement") l.control = LoadControl::Displacement;
  else throw ConfigError("loading.control must be force or displacement");
  if (l.program == LoadProgram::DisplacementRamp) l.control = LoadControl::Displacement;
  if (l.program == LoadProgram::StepForce || l.program == LoadProgram::ForceRamp) l.control = LoadControl::Force;
  get(j, "boundary", l.boundary);
  get(j, "fixed", l.fixed);
  if (j.contains("fixed_components")) {
    const auto s = j.at("fixed_components").get<std::string>();
    if (s == "all") l.fix_all_components = true;
    else if (s == "x") l.fix_all_components = false;
    else throw ConfigError("loading.fixed_components must be all or x");
  }
  get(j, "magnitude", l.magnitude);
  get(j, "rate", l.rate);
  get(j, "per_area", l.per_area);
  if (j.contains("turnaround_time")) l.turnaround_time = j.at("turnaround_time").get<double>();
  if (j.contains("turnaround_strain_pct")) l.turnaround_strain_pct = j.at("turnaround_strain_pct").get<double>();
  if (j.contains("body_force")) l.body = get_pair(j, "body_force");
  if (l.program == LoadProgram::LoadUnload && !l.turnaround_time && !l.turnaround_strain_pct)
    throw ConfigError("load_unload needs loading.turnaround_time or loading.turnaround_strain_pct");
  return l;
}

}  // namespace

ScenarioConfig parse_config(const json& j) {
  only_keys(j, "config", {"name", "geometry", "material", "time", "loading", "solver", "output", "initial_damage",
                          "description"});
  ScenarioConfig c;
  get(j, "name", c.name);
  if (!j.contains("geometry")) throw ConfigError("config needs a 'geometry' section");
  c.geometry = parse_geometry(j.at("geometry"));
  c.material = parse_material(j.value("material", json::object()));
  if (j.contains("time")) {
    const json& t = j.at("time");
    only_keys(t, "time", {"dt", "t_end", "beta", "quasi_static"});
    get(t, "dt", c.dt);
    get(t, "t_end", c.t_end);
    get(t, "beta", c.beta);
    get(t, "quasi_static", c.quasi_static);
  }
  if (!(c.dt > 0.0)) throw ConfigError("time.dt must be positive");
  if (!(c.t_end >= c.dt)) throw ConfigError("time.t_end must be at least one step");
  if (!(c.beta > 0.0 && c.beta <= 0.5)) throw ConfigError("time.beta must lie in (0, 0.5]");
  c.loading = parse_loading(j.value("loading", json::object()));
  if (j.contains("solver")) {
    const json& s = j.at("solver");
    only_keys(s, "solver", {"motion_tol", "damage_tol", "max_iter", "damage_max_iter", "stress_mode", "clamp",
                            "damage", "max_halvings"});
    get(s, "motion_tol", c.solver.motion.tol);
    get(s, "damage_tol", c.solver.damage.tol);
    get(s, "max_iter", c.solver.motion.max_iter);
    get(s, "damage_max_iter", c.solver.damage.max_iter);
    get(s, "clamp", c.solver.clamp);
    get(s, "damage", c.solver.damage_enabled);
    get(s, "max_halvings", c.solver.max_halvings);
    if (s.contains("stress_mode")) {
      const auto m = s.at("stress_mode").get<std::string>();
      if (m == "partial") c.solver.mode = StressMode::Partial;
      else if (m == "complete") c.solver.mode = StressMode::Complete;
      else throw ConfigError("solver.stress_mode must be partial or complete");
    }
    if (!(c.solver.motion.tol > 0.0) || !(c.solver.damage.tol > 0.0)) throw ConfigError("tolerances must be positive");
  }
  c.solver.beta = c.beta;
  c.solver.inertia = !c.quasi_static;
  if (j.contains("output")) {
    const json& o = j.at("output");
    only_keys(o, "output", {"probe_point", "probe_element", "probe_qp", "probe_node", "directory", "csv", "vtk_every"});
    if (o.contains("probe_point")) c.output.probe_point = get_pair(o, "probe_point");
    if (o.contains("probe_node")) c.output.probe_node = get_pair(o, "probe_node");
    get(o, "probe_element", c.output.probe_element);
    get(o, "probe_qp", c.output.probe_qp);
    get(o, "directory", c.output.directory);
    get(o, "csv", c.output.csv);
    get(o, "vtk_every", c.output.vtk_every);
  }
  get(j, "initial_damage", c.initial_damage);
  if (c.initial_damage < 0.0 || c.initial_damage > 1.0) throw ConfigError("initial_damage must lie in [0,1]");
  if (c.geometry.type != "file" && (c.geometry.element == ElementKind::Bar2) != (c.material.plane == Plane::Uniaxial))
    throw ConfigError("1D meshes need material.plane = uniaxial and 2D meshes strain or stress");
  return c;
}

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  try {
    return json::parse(in, nullptr, true, true);
  } catch (const json::parse_error& e) {
    throw ConfigError("cannot parse " + path + ": " + e.what());
  }
}

ScenarioConfig load_config(const std::string& path) { return parse_config(read_json_file(path)); }

void apply_override(json& j, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) throw ConfigError("override must look like key.path=value");
  const std::string path = assignment.substr(0, eq), text = assignment.substr(eq + 1);
  json value;
  try {
    value = json::parse(text);
  } catch (const json::parse_error&) {
    value = text;
  }
  json* node = &j;
  std::stringstream ss(path);
  std::string key;
  std::vector<std::string> keys;
  while (std::getline(ss, key, '.')) keys.push_back(key);
  for (std::size_t i = 0; i + 1 < keys.size(); ++i) {
    json& next = (*node)[keys[i]];
    if (next.is_null()) next = json::object();
    if (!next.is_object()) throw ConfigError("override path '" + path + "' runs through a non-object");
    node = &next;
  }
  (*node)[keys.back()] = value;
}

std::vector<std::string> preset_names() {
  std::vector<std::string> out;
  for (const auto& [k, v] : detail::preset_sources()) out.push_back(k);
  return out;
}

json preset_json(const std::string& name) {
  const auto& src = detail::preset_sources();
  auto it = src.find(name);
  if (it == src.end()) throw ConfigError("unknown preset '" + name + "'");
  return json::parse(it->second, nullptr, true, true);
}

Mesh build_mesh(const GeometryConfig& g) {
  if (g.type == "bar") return make_bar(g.length, g.nx);
  if (g.type == "rectangle") return make_rectangle(g.length, g.height, g.nx, g.ny, g.element);
  if (g.type == "specimen") return make_specimen(g.specimen, g.element);
  return read_mesh(g.path);  // the file decides the element kind
}

}  // namespace fvd
