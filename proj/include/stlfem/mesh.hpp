#pragma once

#include <array>
#include <iosfwd>
#include <string>
#include <vector>

#include "stlfem/config.hpp"

namespace stlfem {

// Structured block of 27-node hexahedra on an axis-aligned box.
struct FluidBlock {
  std::array<double, 3> origin{};
  std::array<double, 3> extent{};
  std::array<int, 3> divisions{};  // elements per axis
  std::array<int, 3> nnode{};      // nodes per axis (2n+1)
  std::vector<std::array<double, 3>> nodes;
  std::vector<std::array<int, 27>> elements;

  int node_id(int ix, int iy, int iz) const {
    return (iz * nnode[1] + iy) * nnode[0] + ix;
  }
  int node_count() const { return nnode[0] * nnode[1] * nnode[2]; }
};

// Structured patch of 9-node quadrilaterals on a planar rectangle in 3-D.
struct ShellPatch {
  std::array<double, 3> origin{};
  std::array<double, 3> axis_a{};  // unit in-plane direction 1
  std::array<double, 3> axis_b{};  // unit in-plane direction 2
  std::array<double, 3> normal{};  // unit normal, axis_a x axis_b
  std::array<double, 2> extent{};
  std::array<int, 2> divisions{};
  std::array<int, 2> nnode{};
  double h = 0.0;  // thickness, m
  std::vector<std::array<double, 3>> nodes;
  std::vector<std::array<int, 9>> elements;

  int node_id(int ia, int ib) const { return ib * nnode[0] + ia; }
  int node_count() const { return nnode[0] * nnode[1]; }
  std::vector<int> boundary_nodes() const;
};

// Target element edge length for a resolution of n nodes per wavelength.
double element_length(double lambda_min, int nodes_per_wavelength);

FluidBlock mesh_fluid_box(const std::array<double, 3>& origin,
                          const std::array<double, 3>& extent, double l_e);

ShellPatch mesh_shell_patch(const std::array<double, 3>& origin,
                            const std::array<double, 3>& axis_a,
                            const std::array<double, 3>& axis_b,
                            const std::array<double, 2>& extent, double l_e,
                            double h);

// Index of the mesh node nearest to p (Euclidean metric, lowest id on ties).
int snap_to_node(const std::vector<std::array<double, 3>>& nodes,
                 const std::array<double, 3>& p);

enum class FluidKind { air, porous };
enum class SetRole { source, microphone, clamped };

struct FluidDomain {
  std::string name;  // "SR", "G", "RR"
  FluidKind kind = FluidKind::air;
  FluidMedium air;
  PorousMedium porous;  // valid when kind==porous
  DampingModel damping;
  double l_e = 0.0;  // realised target edge length
  FluidBlock block;
};

struct WallDomain {
  std::string name;  // "W_SR", "W_RR", "W"
  SolidMedium medium;
  double l_e = 0.0;
  ShellPatch patch;
};

// Pairing of one wall face with one fluid domain face.
struct InterfaceDescriptor {
  int wall = 0;
  int domain = 0;
  double normal_sign = 1.0;  // +1 when the fluid lies on the +normal side
  bool conforming = true;
};

struct NodeSet {
  std::string name;
  SetRole role = SetRole::microphone;
  bool on_wall = false;
  int owner = 0;  // fluid domain or wall index
  std::vector<int> ids;
  std::vector<std::array<double, 3>> requested;  // empty for clamped sets
  std::vector<double> drift;                     // snap distances, m
};

// Discretised scene: fluid domains ordered G, RR, SR (gap first when present),
// walls ordered W_RR, W_SR for double constructions.
struct Scene {
  std::vector<FluidDomain> domains;
  std::vector<WallDomain> walls;
  std::vector<InterfaceDescriptor> interfaces;
  std::vector<NodeSet> sets;
  double f_sizing = 0.0;  // frequency the mesh was sized for

  int domain_index(const std::string& name) const;
  const NodeSet& set(const std::string& name) const;
};

// Mesh the whole scene for a maximum frequency f_max. Microphone positions in
// the receiving room are given room-locally and shifted by the source-room
// depth plus gap depth here.
Scene build_scene(const ScenarioConfig& cfg, double f_max);

// Plain-text mesh export (nodes, connectivity, node sets).
void write_mesh(const Scene& scene, std::ostream& os);

}  // namespace stlfem
