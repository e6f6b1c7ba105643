#pragma once

#include <vector>

#include "stlfem/mesh.hpp"

namespace stlfem {

// One signed entry of the surface coupling matrix C = sign * int N_s N_f dG,
// acting between the wall-normal displacement DOF of the structure node and
// the pressure DOF of the fluid node.
struct CouplingEntry {
  int s_node = 0;
  int f_node = 0;
  double v = 0.0;
};

struct CouplingBlock {
  int wall = 0;
  int domain = 0;
  int normal_axis = 0;  // global axis of the wall normal
  std::vector<CouplingEntry> entries;
};

// Matched-grid evaluation; requires identical wall and fluid face meshes.
CouplingBlock conforming_coupling(const InterfaceDescriptor& ic,
                                  const Scene& scene);

// Segment-overlap (mortar) evaluation for non-matching face grids.
CouplingBlock nonconforming_coupling(const InterfaceDescriptor& ic,
                                     const Scene& scene);

// Dispatch on grid conformity.
CouplingBlock build_coupling(const InterfaceDescriptor& ic, const Scene& scene);

// Sum of all coupling entries; equals sign * interface area for any admissible
// discretisation.
double coupling_entry_sum(const CouplingBlock& c);

}  // namespace stlfem
