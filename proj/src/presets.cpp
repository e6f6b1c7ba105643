#include <array>

#include "stlfem/scenario.hpp"

namespace stlfem {

namespace {

FluidMedium air_medium() { return FluidMedium{}; }

PorousMedium glass_wool() {
  PorousMedium p;
  p.alpha_inf = 1.06;
  p.Lambda = 56e-6;
  p.Lambda_p = 110e-6;
  p.sigma = 40000.0;
  p.phi = 0.94;
  p.rho1 = 130.0;
  p.fluid = air_medium();
  return p;
}

SolidMedium plasterboard() {
  SolidMedium s;
  s.E = 3e9;
  s.nu = 0.15;
  s.rho = 800.0;
  s.eta_s = 0.03;
  return s;
}

DampingModel reverb() {
  DampingModel d;
  d.kind = DampingKind::reverberation;
  d.T = 1.5;
  return d;
}

DampingModel atmospheric() {
  DampingModel d;
  d.kind = DampingKind::atmospheric;
  return d;
}

ScenarioConfig base_config(const std::string& name) {
  ScenarioConfig cfg;
  cfg.name = name;
  cfg.fluids["air"] = air_medium();
  cfg.solids["plasterboard"] = plasterboard();
  cfg.Q_s = 1e-4;
  cfg.df = 1.0;
  cfg.band_min = 8.0;
  cfg.band_max = 630.0;
  cfg.area_correction = false;
  return cfg;
}

ScenarioConfig large_base(const std::string& name) {
  ScenarioConfig cfg = base_config(name);
  cfg.source_room.dims = {5.0, 4.0, 3.0};
  cfg.receiving_room.dims = {4.5, 4.0, 3.0};
  cfg.source_room.damping = reverb();
  cfg.receiving_room.damping = reverb();
  cfg.nodes_per_wavelength = 13;
  cfg.mesh_mode = MeshMode::domain_specific;
  cfg.intervals = {{1.0, 300.0}, {300.0, 500.0}, {500.0, 650.0}, {650.0, 715.0}};

  constexpr std::array<std::array<double, 3>, 12> sources{{
      {1.2, 1.0, 1.7},
      {0.8, 3.0, 1.2},
      {1.3, 2.1, 2.3},
      {1.5, 1.8, 0.9},
      {2.0, 2.5, 1.4},
      {2.2, 1.2, 2.0},
      {2.6, 2.7, 2.1},
      {2.8, 1.6, 1.8},
      {2.9, 0.8, 1.3},
      {3.2, 2.4, 1.1},
      {3.9, 1.5, 1.9},
      {4.0, 3.1, 0.8},
  }};
  constexpr std::array<std::array<double, 3>, 8> mics_sr{{
      {0.7, 1.6, 1.4},
      {1.2, 2.5, 1.6},
      {2.0, 1.0, 1.0},
      {1.9, 3.0, 2.0},
      {2.6, 2.2, 0.9},
      {3.4, 0.8, 2.3},
      {4.0, 1.7, 0.7},
      {3.5, 3.3, 1.6},
  }};
  constexpr std::array<std::array<double, 3>, 8> mics_rr{{
      {1.2, 1.3, 0.8},
      {1.4, 3.0, 1.6},
      {1.6, 2.3, 1.1},
      {1.9, 1.7, 2.1},
      {2.6, 2.6, 1.4},
      {2.7, 1.4, 1.7},
      {3.6, 1.0, 2.2},
      {3.3, 3.0, 1.0},
  }};
  cfg.source_positions.assign(sources.begin(), sources.end());
  cfg.mics_source_room.assign(mics_sr.begin(), mics_sr.end());
  cfg.mics_receiving_room.assign(mics_rr.begin(), mics_rr.end());
  return cfg;
}

ScenarioConfig small_base(const std::string& name, double l_x_rr) {
  ScenarioConfig cfg = base_config(name);
  cfg.source_room.dims = {0.56, 1.05, 0.72};
  cfg.receiving_room.dims = {l_x_rr, 1.05, 0.72};
  cfg.nodes_per_wavelength = 12;
  cfg.mesh_mode = MeshMode::conforming;
  cfg.intervals = {{1.0, 1000.0}};
  cfg.source_positions = {{0.1, 0.3, 0.1}, {0.3, 0.8, 0.4}};
  cfg.mics_source_room = {{0.1, 0.4, 0.7}, {0.2, 0.8, 0.2}};
  return cfg;
}

WallConfig leaf(double h) {
  WallConfig w;
  w.medium = "plasterboard";
  w.h = h;
  return w;
}

ScenarioConfig make_small_slw1() {
  ScenarioConfig cfg = small_base("small-slw1", 0.63);
  cfg.source_room.damping = atmospheric();
  cfg.receiving_room.damping = atmospheric();
  cfg.walls = {leaf(0.02)};
  cfg.mics_receiving_room = {{0.34, 0.6, 0.6}, {0.04, 0.2, 0.4}};
  return cfg;
}

ScenarioConfig make_small_slw2() {
  ScenarioConfig cfg = small_base("small-slw2", 0.63);
  cfg.source_room.damping = reverb();
  cfg.receiving_room.damping = reverb();
  cfg.walls = {leaf(0.02)};
  cfg.mics_receiving_room = {{0.34, 0.6, 0.6}, {0.04, 0.2, 0.4}};
  return cfg;
}

ScenarioConfig small_dlw_base(const std::string& name) {
  ScenarioConfig cfg = small_base(name, 0.62);
  cfg.source_room.damping = reverb();
  cfg.receiving_room.damping = reverb();
  cfg.gap.present = true;
  cfg.gap.l_x = 0.01;
  cfg.walls = {leaf(0.02), leaf(0.02)};
  cfg.mics_receiving_room = {{0.33, 0.6, 0.6}, {0.03, 0.2, 0.4}};
  return cfg;
}

ScenarioConfig make_small_dlwni() {
  ScenarioConfig cfg = small_dlw_base("small-dlwni");
  cfg.gap.medium = "air";
  cfg.gap.damping = atmospheric();
  return cfg;
}

ScenarioConfig make_small_dlwi() {
  ScenarioConfig cfg = small_dlw_base("small-dlwi");
  cfg.porous["glass_wool"] = glass_wool();
  cfg.gap.medium = "glass_wool";
  cfg.nodes_per_wavelength = 7;
  return cfg;
}

ScenarioConfig make_large_slw() {
  ScenarioConfig cfg = large_base("large-slw");
  cfg.walls = {leaf(0.05)};
  return cfg;
}

ScenarioConfig make_large_dlwni() {
  ScenarioConfig cfg = large_base("large-dlwni");
  cfg.gap.present = true;
  cfg.gap.l_x = 0.05;
  cfg.gap.medium = "air";
  cfg.gap.damping = atmospheric();
  cfg.walls = {leaf(0.025), leaf(0.025)};
  return cfg;
}

ScenarioConfig make_large_dlwi() {
  ScenarioConfig cfg = large_base("large-dlwi");
  cfg.gap.present = true;
  cfg.gap.l_x = 0.05;
  cfg.gap.medium = "glass_wool";
  cfg.porous["glass_wool"] = glass_wool();
  cfg.walls = {leaf(0.025), leaf(0.025)};
  return cfg;
}

}  // namespace

std::vector<std::string> preset_names() {
  return {"small-slw1",  "small-slw2", "small-dlwni", "small-dlwi",
          "large-slw",   "large-dlwni", "large-dlwi"};
}

ScenarioConfig preset(const std::string& name) {
  if (name == "small-slw1") return make_small_slw1();
  if (name == "small-slw2") return make_small_slw2();
  if (name == "small-dlwni") return make_small_dlwni();
  if (name == "small-dlwi") return make_small_dlwi();
  if (name == "large-slw") return make_large_slw();
  if (name == "large-dlwni") return make_large_dlwni();
  if (name == "large-dlwi") return make_large_dlwi();
  throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace stlfem
