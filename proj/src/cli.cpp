#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "stlfem/scenario.hpp"

namespace stlfem {

namespace {

namespace fs = std::filesystem;

int default_workers() {
  const char* env = std::getenv("STLFEM_WORKERS");
  if (!env) return 1;
  int n = std::atoi(env);
  return n >= 1 ? n : 1;
}

struct CommonArgs {
  std::string config_path;
  std::string preset_name;
  std::optional<double> fmin;
  std::optional<double> fmax;
  std::optional<double> df;
  std::optional<int> rate;
  int workers = default_workers();
  std::string out_dir = "out";
  bool snapshot_fields = false;
};

void add_common(CLI::App* sub, CommonArgs& a) {
  auto* cfg = sub->add_option("--config", a.config_path,
                              "Scenario configuration file (JSON)");
  auto* pre = sub->add_option("--preset", a.preset_name,
                              "Built-in scenario (see `presets`)");
  cfg->excludes(pre);
  sub->add_option("--fmin", a.fmin, "Clip the sweep plan from below [Hz]");
  sub->add_option("--fmax", a.fmax, "Clip the sweep plan from above [Hz]");
  sub->add_option("--df", a.df, "Frequency step [Hz]");
  sub->add_option("--nodes-per-wavelength", a.rate,
                  "Mesh sampling rate (nodes per shortest wavelength)");
  sub->add_option("--workers", a.workers, "Parallel frequency workers");
  sub->add_option("--out-dir", a.out_dir, "Output directory");
  sub->add_flag("--snapshot-fields", a.snapshot_fields,
                "Store full solution fields (memory heavy)");
}

ScenarioConfig resolve_config(const CommonArgs& a) {
  if (a.config_path.empty() && a.preset_name.empty())
    throw ConfigError("pass --config <file> or --preset <name>");
  ScenarioConfig cfg = a.config_path.empty() ? preset(a.preset_name)
                                             : load_config(a.config_path);
  if (a.df) cfg.df = *a.df;
  if (a.rate) cfg.nodes_per_wavelength = *a.rate;
  if (a.fmin || a.fmax) {
    double lo = a.fmin ? *a.fmin : cfg.intervals.front().f_lo;
    double hi = a.fmax ? *a.fmax : cfg.intervals.back().f_hi;
    clip_intervals(cfg, lo, hi);
  }
  return cfg;
}

RunOptions run_options(const CommonArgs& a) {
  RunOptions opt;
  opt.out_dir = a.out_dir;
  opt.workers = std::max(1, a.workers);
  opt.snapshot_fields = a.snapshot_fields;
  return opt;
}

int cmd_presets() {
  for (const std::string& name : preset_names()) {
    ScenarioConfig cfg = preset(name);
    std::printf("%-12s %zu leaf/leaves, gap %s, %s mesh, sweep %g-%g Hz\n",
                name.c_str(), cfg.walls.size(),
                cfg.gap.present ? cfg.gap.medium.c_str() : "none",
                cfg.mesh_mode == MeshMode::conforming ? "conforming"
                                                      : "domain-specific",
                cfg.intervals.front().f_lo, cfg.intervals.back().f_hi);
  }
  return 0;
}

int cmd_mesh(const CommonArgs& a) {
  ScenarioConfig cfg = resolve_config(a);
  for (const SweepInterval& iv : cfg.intervals) {
    Scene scene = build_scene(cfg, iv.f_hi);
    DofMap dofs = build_dof_map(scene);
    std::printf("interval %g %g Hz (meshed at %g Hz): %d DOF\n", iv.f_lo,
                iv.f_hi, iv.f_hi, dofs.n);
    for (const FluidDomain& d : scene.domains)
      std::printf("  fluid %-4s %-10s l_e %g m, divisions %d x %d x %d, %d nodes\n",
                  d.name.c_str(), d.kind == FluidKind::air ? "air" : "porous",
                  d.l_e, d.block.divisions[0], d.block.divisions[1],
                  d.block.divisions[2], d.block.nnode[0] * d.block.nnode[1] *
                                            d.block.nnode[2]);
    for (const WallDomain& w : scene.walls)
      std::printf("  wall  %-4s h %g m, l_e %g m, divisions %d x %d, %d nodes\n",
                  w.name.c_str(), w.patch.h, w.l_e, w.patch.divisions[0],
                  w.patch.divisions[1], w.patch.nnode[0] * w.patch.nnode[1]);
    for (const InterfaceDescriptor& ic : scene.interfaces)
      std::printf("  interface %s/%s: %s\n", scene.walls[static_cast<size_t>(ic.wall)].name.c_str(),
                  scene.domains[static_cast<size_t>(ic.domain)].name.c_str(),
                  ic.conforming ? "conforming" : "mortar");
    for (const NodeSet& s : scene.sets) {
      double worst = 0.0;
      for (double g : s.drift) worst = std::max(worst, g);
      std::printf("  set %-16s %zu node(s), max drift %g m\n", s.name.c_str(),
                  s.ids.size(), worst);
    }
  }
  return 0;
}

int cmd_sweep(const CommonArgs& a) {
  ScenarioConfig cfg = resolve_config(a);
  RunOptions opt = run_options(a);
  opt.bands = false;
  StlResult res = run_stl(cfg, opt);
  std::printf("%zu narrowband lines, outputs in %s\n", res.freqs.size(),
              a.out_dir.c_str());
  return res.ok ? 0 : 1;
}

int cmd_stl(const CommonArgs& a) {
  ScenarioConfig cfg = resolve_config(a);
  StlResult res = run_stl(cfg, run_options(a));
  std::printf("band [Hz]   R [dB]\n");
  for (size_t i = 0; i < res.stl.bands.size(); ++i)
    std::printf("%8g   %7.2f\n", res.stl.bands[i].nominal, res.stl.values[i]);
  std::printf("outputs in %s\n", a.out_dir.c_str());
  if (!res.ok) {
    std::fprintf(stderr, "stl: some frequency solves failed; outputs are partial\n");
    return 1;
  }
  return 0;
}

int cmd_converge(const CommonArgs& a, const std::vector<int>& rates) {
  ScenarioConfig cfg = resolve_config(a);
  ConvergenceReport rep = run_convergence(cfg, rates, run_options(a));
  for (const ConvergencePair& pr : rep.pairs) {
    double mean = 0.0;
    int cnt = 0;
    for (const FracBand& b : pr.frac_RR)
      if (b.lines > 0) {
        mean += b.value;
        ++cnt;
      }
    std::printf("rates %d vs %d: mean receiving-room FRAC %.4f over %d interval(s), "
                "mean |p| error %.3g\n",
                pr.rate_coarse, pr.rate_fine, cnt ? mean / cnt : 0.0, cnt,
                pr.err_RR.mean);
  }
  std::printf("outputs in %s\n", a.out_dir.c_str());
  return rep.ok ? 0 : 1;
}

int cmd_reference(const CommonArgs& a) {
  ScenarioConfig cfg = resolve_config(a);
  const FluidMedium& air = cfg.fluids.at(cfg.source_room.medium);
  double m_total = 0.0;
  for (const WallConfig& w : cfg.walls) {
    const SolidMedium& s = cfg.solids.at(w.medium);
    m_total += s.rho * w.h;
    std::printf("leaf h %g m: f_c %.2f Hz\n", w.h,
                coincidence_frequency(s, w.h, air));
  }
  std::optional<double> f0;
  if (cfg.gap.present && cfg.walls.size() == 2) {
    const SolidMedium& s1 = cfg.solids.at(cfg.walls[0].medium);
    const SolidMedium& s2 = cfg.solids.at(cfg.walls[1].medium);
    double K = cfg.porous.count(cfg.gap.medium)
                   ? gap_stiffness(cfg.porous.at(cfg.gap.medium))
                   : gap_stiffness(cfg.fluids.at(cfg.gap.medium));
    f0 = double_wall_resonance(s1.rho * cfg.walls[0].h, s2.rho * cfg.walls[1].h,
                               K, cfg.gap.l_x);
    std::printf("double-wall resonance f0 %.2f Hz\n", *f0);
  }

  fs::create_directories(a.out_dir);
  std::ofstream os(fs::path(a.out_dir) / "reference.csv");
  os << "f_nominal,mass_law_dB,slope_guide_dB\n";
  char line[128];
  for (const ThirdOctaveBand& b : third_octave_bands(cfg.band_min, cfg.band_max)) {
    double berger = berger_reduction_index(b.nominal, m_total, air);
    if (f0) {
      double guide = octave_slope_guide(
          b.nominal, *f0, berger_reduction_index(*f0, m_total, air));
      std::snprintf(line, sizeof line, "%.10g,%.4f,%.4f\n", b.nominal, berger,
                    guide);
    } else {
      std::snprintf(line, sizeof line, "%.10g,%.4f,\n", b.nominal, berger);
    }
    os << line;
  }
  std::printf("reference curves in %s/reference.csv\n", a.out_dir.c_str());
  return 0;
}

}  // namespace

int run_cli(int argc, char** argv) {
  CLI::App app{"Coupled room-wall-room sound transmission loss simulator"};
  app.require_subcommand(1);

  CommonArgs args;
  std::vector<int> rates{7, 10, 13, 16};

  CLI::App* presets_cmd = app.add_subcommand("presets", "List built-in scenarios");
  CLI::App* mesh_cmd = app.add_subcommand("mesh", "Build meshes and print statistics");
  CLI::App* sweep_cmd = app.add_subcommand("sweep", "Narrowband frequency sweep");
  CLI::App* stl_cmd = app.add_subcommand("stl", "Full sound-transmission-loss pipeline");
  CLI::App* conv_cmd = app.add_subcommand("converge", "Mesh convergence (FRAC) study");
  CLI::App* ref_cmd = app.add_subcommand("reference", "Analytic reference curves");

  for (CLI::App* sub : {mesh_cmd, sweep_cmd, stl_cmd, conv_cmd, ref_cmd})
    add_common(sub, args);
  conv_cmd->add_option("--rates", rates, "Sampling rates to compare")
      ->delimiter(',');

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (presets_cmd->parsed()) return cmd_presets();
    if (mesh_cmd->parsed()) return cmd_mesh(args);
    if (sweep_cmd->parsed()) return cmd_sweep(args);
    if (stl_cmd->parsed()) return cmd_stl(args);
    if (conv_cmd->parsed()) return cmd_converge(args, rates);
    if (ref_cmd->parsed()) return cmd_reference(args);
  } catch (const Error& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "internal error: %s\n", e.what());
    return 1;
  }
  return 0;
}

}  // namespace stlfem
