#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "stlfem/materials.hpp"

namespace stlfem {

struct RoomConfig {
  std::array<double, 3> dims{};  // l_x, l_y, l_z in m
  std::string medium = "air";
  DampingModel damping;
};

struct GapConfig {
  bool present = false;
  double l_x = 0.0;
  std::string medium = "air";
  DampingModel damping;
};

struct WallConfig {
  std::string medium = "plasterboard";
  double h = 0.0;  // thickness, m
};

struct SweepInterval {
  double f_lo = 0.0;
  double f_hi = 0.0;
};

enum class MeshMode { conforming, domain_specific };

// Full description of one virtual laboratory run.
struct ScenarioConfig {
  std::string name;
  RoomConfig source_room;
  RoomConfig receiving_room;
  GapConfig gap;
  std::vector<WallConfig> walls;  // one leaf (single wall) or two (double wall)

  std::map<std::string, FluidMedium> fluids;
  std::map<std::string, PorousMedium> porous;
  std::map<std::string, SolidMedium> solids;

  double Q_s = 1e-4;  // volume velocity amplitude, m^3/s
  std::vector<std::array<double, 3>> source_positions;      // source-room local
  std::vector<std::array<double, 3>> mics_source_room;      // source-room local
  std::vector<std::array<double, 3>> mics_receiving_room;   // receiving-room local

  std::vector<SweepInterval> intervals;
  double df = 1.0;
  int nodes_per_wavelength = 13;
  MeshMode mesh_mode = MeshMode::domain_specific;

  double band_min = 8.0;
  double band_max = 630.0;
  bool area_correction = false;
};

}  // namespace stlfem
