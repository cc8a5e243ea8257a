// Command-line front end: run configs and presets, compare stress modes, MSD of CSV columns, mesh export.
#include <cstdio>
#include <filesystem>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvd/config.hpp"
#include "fvd/errors.hpp"
#include "fvd/io.hpp"
#include "fvd/mesh.hpp"
#include "fvd/scenario.hpp"

namespace {

void summarize(const fvd::ScenarioConfig& cfg, const fvd::RunResult& r) {
  const auto& s = r.stats;
  std::printf("%s: %d steps, %d halvings, final dt %.3e\n", cfg.name.c_str(), s.steps, s.halvings, s.final_dt);
  if (r.series.size() > 0) {
    std::printf("  final strain %.6e  stress %.6e  displacement %.6e\n", r.series.column("strain").back(),
                r.series.column("stress").back(), r.series.column("displacement").back());
  }
  std::printf("  phi in [%.4f, %.4f], min psi_m %.3e, min R %.3e\n", s.phi_min, s.phi_max, s.min_psi_m, s.min_R);
  std::printf("  output: %s/%s\n", cfg.output.directory.c_str(), cfg.output.csv.c_str());
}

int run(nlohmann::json j) {
  const fvd::ScenarioConfig cfg = fvd::parse_config(j);
  fvd::RunOptions opt;
  opt.write_outputs = true;
  summarize(cfg, fvd::run_scenario(cfg, opt));
  return 0;
}

nlohmann::json config_or_preset(const std::string& what) {
  if (std::filesystem::exists(what)) return fvd::read_json_file(what);
  return fvd::preset_json(what);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fractional viscoelastic damage solver"};
  app.require_subcommand(1);

  std::string config_path;
  auto* run_cmd = app.add_subcommand("run", "Run a scenario config file");
  run_cmd->add_option("config", config_path, "JSON config")->required();

  std::string preset;
  std::vector<std::string> overrides;
  bool list = false;
  auto* preset_cmd = app.add_subcommand("preset", "Run a built-in preset");
  preset_cmd->add_option("name", preset, "preset name");
  preset_cmd->add_option("--override,-O", overrides, "key.path=value, repeatable");
  preset_cmd->add_flag("--list", list, "list presets and exit");

  std::string cmp_path;
  std::vector<std::string> cmp_overrides;
  auto* cmp_cmd = app.add_subcommand("compare-stress", "MSD between complete and partial stress");
  cmp_cmd->add_option("config", cmp_path, "config file or preset name")->required();
  cmp_cmd->add_option("--override,-O", cmp_overrides, "key.path=value, repeatable");

  std::string csv_a, csv_b, col;
  bool by_b = false;
  auto* msd_cmd = app.add_subcommand("msd", "MSD between one column of two CSV files");
  msd_cmd->add_option("a", csv_a)->required();
  msd_cmd->add_option("b", csv_b)->required();
  msd_cmd->add_option("--col", col, "column name")->required();
  msd_cmd->add_flag("--by-b", by_b, "normalize by the second series instead of the first");

  std::string mesh_src, mesh_out;
  auto* mesh_cmd = app.add_subcommand("mesh-gen", "Write the mesh of a preset or config file");
  mesh_cmd->add_option("preset", mesh_src)->required();
  mesh_cmd->add_option("-o,--output", mesh_out)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run_cmd) return run(fvd::read_json_file(config_path));
    if (*preset_cmd) {
      if (list || preset.empty()) {
        for (const auto& n : fvd::preset_names()) std::cout << n << '\n';
        return 0;
      }
      nlohmann::json j = fvd::preset_json(preset);
      for (const auto& o : overrides) fvd::apply_override(j, o);
      return run(j);
    }
    if (*cmp_cmd) {
      nlohmann::json j = config_or_preset(cmp_path);
      for (const auto& o : cmp_overrides) fvd::apply_override(j, o);
      const auto r = fvd::compare_stress_modes(fvd::parse_config(j));
      std::printf("msd %.6e\nstrain_pct %.6f\n", r.msd, r.strain_pct);
      return 0;
    }
    if (*msd_cmd) {
      const auto a = fvd::read_csv(csv_a), b = fvd::read_csv(csv_b);
      std::printf("%.6e\n", fvd::msd(a.column(col), b.column(col),
                                     by_b ? fvd::Normalization::ByB : fvd::Normalization::ByA));
      return 0;
    }
    if (*mesh_cmd) {
      const auto cfg = fvd::parse_config(config_or_preset(mesh_src));
      fvd::write_mesh(fvd::build_mesh(cfg.geometry), mesh_out);
      return 0;
    }
  } catch (const fvd::SolverDivergence& e) {
    std::cerr << "solver divergence: " << e.what() << '\n';
    return 2;
  } catch (const fvd::NonConvergence& e) {
    std::cerr << "solver divergence: " << e.what() << '\n';
    return 2;
  } catch (const fvd::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
