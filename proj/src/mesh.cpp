#include "stlfem/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <iostream>
#include <limits>
#include <ostream>
#include <set>

namespace stlfem {

std::vector<int> ShellPatch::boundary_nodes() const {
  std::vector<int> out;
  for (int ib = 0; ib < nnode[1]; ++ib)
    for (int ia = 0; ia < nnode[0]; ++ia)
      if (ia == 0 || ia == nnode[0] - 1 || ib == 0 || ib == nnode[1] - 1)
        out.push_back(node_id(ia, ib));
  return out;
}

double element_length(double lambda_min, int nodes_per_wavelength) {
  if (lambda_min <= 0.0) throw DomainError("mesh: wavelength must be positive");
  if (nodes_per_wavelength < 3)
    throw DomainError("mesh: quadratic elements need at least 3 nodes per wavelength");
  return 2.0 * lambda_min / (nodes_per_wavelength - 1);
}

namespace {

int division_count(double extent, double l_e) {
  if (extent <= 0.0) throw GeometryError("mesh: extent must be positive");
  if (l_e <= 0.0) throw GeometryError("mesh: element length must be positive");
  return std::max(1, static_cast<int>(std::ceil(extent / l_e - 1e-9)));
}

}  // namespace

FluidBlock mesh_fluid_box(const std::array<double, 3>& origin,
                          const std::array<double, 3>& extent, double l_e) {
  FluidBlock b;
  b.origin = origin;
  b.extent = extent;
  for (int d = 0; d < 3; ++d) {
    b.divisions[d] = division_count(extent[d], l_e);
    b.nnode[d] = 2 * b.divisions[d] + 1;
  }
  b.nodes.resize(static_cast<size_t>(b.node_count()));
  for (int iz = 0; iz < b.nnode[2]; ++iz)
    for (int iy = 0; iy < b.nnode[1]; ++iy)
      for (int ix = 0; ix < b.nnode[0]; ++ix)
        b.nodes[static_cast<size_t>(b.node_id(ix, iy, iz))] = {
            origin[0] + extent[0] * ix / (b.nnode[0] - 1),
            origin[1] + extent[1] * iy / (b.nnode[1] - 1),
            origin[2] + extent[2] * iz / (b.nnode[2] - 1)};
  b.elements.reserve(static_cast<size_t>(b.divisions[0]) * b.divisions[1] *
                     b.divisions[2]);
  for (int ez = 0; ez < b.divisions[2]; ++ez)
    for (int ey = 0; ey < b.divisions[1]; ++ey)
      for (int ex = 0; ex < b.divisions[0]; ++ex) {
        std::array<int, 27> conn;
        for (int k = 0; k < 3; ++k)
          for (int j = 0; j < 3; ++j)
            for (int i = 0; i < 3; ++i)
              conn[(k * 3 + j) * 3 + i] =
                  b.node_id(2 * ex + i, 2 * ey + j, 2 * ez + k);
        b.elements.push_back(conn);
      }
  return b;
}

ShellPatch mesh_shell_patch(const std::array<double, 3>& origin,
                            const std::array<double, 3>& axis_a,
                            const std::array<double, 3>& axis_b,
                            const std::array<double, 2>& extent, double l_e,
                            double h) {
  ShellPatch p;
  p.origin = origin;
  p.axis_a = axis_a;
  p.axis_b = axis_b;
  p.normal = {axis_a[1] * axis_b[2] - axis_a[2] * axis_b[1],
              axis_a[2] * axis_b[0] - axis_a[0] * axis_b[2],
              axis_a[0] * axis_b[1] - axis_a[1] * axis_b[0]};
  p.extent = extent;
  p.h = h;
  for (int d = 0; d < 2; ++d) {
    p.divisions[d] = division_count(extent[d], l_e);
    p.nnode[d] = 2 * p.divisions[d] + 1;
  }
  p.nodes.resize(static_cast<size_t>(p.node_count()));
  for (int ib = 0; ib < p.nnode[1]; ++ib)
    for (int ia = 0; ia < p.nnode[0]; ++ia) {
      double sa = extent[0] * ia / (p.nnode[0] - 1);
      double sb = extent[1] * ib / (p.nnode[1] - 1);
      p.nodes[static_cast<size_t>(p.node_id(ia, ib))] = {
          origin[0] + sa * axis_a[0] + sb * axis_b[0],
          origin[1] + sa * axis_a[1] + sb * axis_b[1],
          origin[2] + sa * axis_a[2] + sb * axis_b[2]};
    }
  p.elements.reserve(static_cast<size_t>(p.divisions[0]) * p.divisions[1]);
  for (int eb = 0; eb < p.divisions[1]; ++eb)
    for (int ea = 0; ea < p.divisions[0]; ++ea) {
      std::array<int, 9> conn;
      for (int j = 0; j < 3; ++j)
        for (int i = 0; i < 3; ++i)
          conn[j * 3 + i] = p.node_id(2 * ea + i, 2 * eb + j);
      p.elements.push_back(conn);
    }
  return p;
}

int snap_to_node(const std::vector<std::array<double, 3>>& nodes,
                 const std::array<double, 3>& p) {
  if (nodes.empty()) throw GeometryError("snap: empty node list");
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t i = 0; i < nodes.size(); ++i) {
    double dx = nodes[i][0] - p[0];
    double dy = nodes[i][1] - p[1];
    double dz = nodes[i][2] - p[2];
    double d = dx * dx + dy * dy + dz * dz;
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(i);
    }
  }
  return best;
}

int Scene::domain_index(const std::string& name) const {
  for (size_t i = 0; i < domains.size(); ++i)
    if (domains[i].name == name) return static_cast<int>(i);
  throw ConfigError("scene: no fluid domain named " + name);
}

const NodeSet& Scene::set(const std::string& name) const {
  for (const NodeSet& s : sets)
    if (s.name == name) return s;
  throw ConfigError("scene: no node set named " + name);
}

namespace {

const FluidMedium& resolve_fluid(const ScenarioConfig& cfg,
                                 const std::string& name) {
  auto it = cfg.fluids.find(name);
  if (it == cfg.fluids.end())
    throw ConfigError("config: unknown fluid medium '" + name + "'");
  return it->second;
}

double domain_wavelength(const FluidDomain& d, double f) {
  return d.kind == FluidKind::air ? wavelength_fluid(d.air, f)
                                  : wavelength_equivalent(d.porous, f);
}

void check_inside(const std::array<double, 3>& p,
                  const std::array<double, 3>& origin,
                  const std::array<double, 3>& extent, const std::string& what) {
  for (int d = 0; d < 3; ++d)
    if (p[d] < origin[d] - 1e-12 || p[d] > origin[d] + extent[d] + 1e-12)
      throw DomainError(what + ": position outside its room");
}

NodeSet snap_set(const std::string& name, SetRole role, int owner,
                 const FluidDomain& dom,
                 const std::vector<std::array<double, 3>>& requested) {
  NodeSet s;
  s.name = name;
  s.role = role;
  s.owner = owner;
  s.requested = requested;
  for (const auto& p : requested) {
    check_inside(p, dom.block.origin, dom.block.extent, name);
    int id = snap_to_node(dom.block.nodes, p);
    const auto& q = dom.block.nodes[static_cast<size_t>(id)];
    double dx = q[0] - p[0], dy = q[1] - p[1], dz = q[2] - p[2];
    s.ids.push_back(id);
    s.drift.push_back(std::sqrt(dx * dx + dy * dy + dz * dz));
  }
  std::set<int> uniq(s.ids.begin(), s.ids.end());
  if (uniq.size() != s.ids.size())
    std::cerr << "[mesh] warning: set '" << name
              << "' has positions snapping to the same node\n";
  return s;
}

}  // namespace

Scene build_scene(const ScenarioConfig& cfg, double f_max) {
  if (f_max <= 0.0) throw DomainError("scene: f_max must be positive");
  const auto& sr = cfg.source_room;
  const auto& rr = cfg.receiving_room;
  for (int d = 0; d < 3; ++d) {
    if (sr.dims[d] <= 0.0 || rr.dims[d] <= 0.0)
      throw GeometryError("scene: room dimensions must be positive");
  }
  if (sr.dims[1] != rr.dims[1] || sr.dims[2] != rr.dims[2])
    throw GeometryError("scene: room cross sections must match");
  if (cfg.gap.present && cfg.gap.l_x <= 0.0)
    throw GeometryError("scene: gap depth must be positive");
  size_t need_walls = cfg.gap.present ? 2 : 1;
  if (cfg.walls.size() != need_walls)
    throw ConfigError("config: construction needs exactly " +
                      std::to_string(need_walls) + " wall leaf/leaves");

  Scene scene;
  scene.f_sizing = f_max;
  const double ly = sr.dims[1], lz = sr.dims[2];
  const double x_wsr = sr.dims[0];
  const double offset = sr.dims[0] + (cfg.gap.present ? cfg.gap.l_x : 0.0);

  auto make_fluid = [&](const std::string& name, const std::string& medium,
                        const DampingModel& damping,
                        std::array<double, 3> origin,
                        std::array<double, 3> extent) {
    FluidDomain d;
    d.name = name;
    d.damping = damping;
    if (cfg.porous.count(medium)) {
      d.kind = FluidKind::porous;
      d.porous = cfg.porous.at(medium);
      validate(d.porous);
      d.air = d.porous.fluid;
    } else {
      d.kind = FluidKind::air;
      d.air = resolve_fluid(cfg, medium);
      validate(d.air);
    }
    d.block.origin = origin;
    d.block.extent = extent;
    return d;
  };

  if (cfg.gap.present)
    scene.domains.push_back(make_fluid("G", cfg.gap.medium, cfg.gap.damping,
                                       {x_wsr, 0.0, 0.0},
                                       {cfg.gap.l_x, ly, lz}));
  scene.domains.push_back(make_fluid("RR", rr.medium, rr.damping,
                                     {offset, 0.0, 0.0},
                                     {rr.dims[0], ly, lz}));
  scene.domains.push_back(make_fluid("SR", sr.medium, sr.damping,
                                     {0.0, 0.0, 0.0},
                                     {sr.dims[0], ly, lz}));

  struct WallPlan {
    std::string name;
    double x;
    const WallConfig* wc;
  };
  std::vector<WallPlan> plans;
  if (cfg.gap.present) {
    plans.push_back({"W_RR", offset, &cfg.walls[1]});
    plans.push_back({"W_SR", x_wsr, &cfg.walls[0]});
  } else {
    plans.push_back({"W", x_wsr, &cfg.walls[0]});
  }
  for (const auto& wp : plans) {
    WallDomain w;
    w.name = wp.name;
    auto it = cfg.solids.find(wp.wc->medium);
    if (it == cfg.solids.end())
      throw ConfigError("config: unknown solid medium '" + wp.wc->medium + "'");
    w.medium = it->second;
    validate(w.medium);
    if (wp.wc->h <= 0.0) throw ConfigError("config: wall thickness must be positive");
    w.patch.h = wp.wc->h;
    w.patch.origin = {wp.x, 0.0, 0.0};
    scene.walls.push_back(w);
  }

  // Element length targets, rounded to 2 decimals before computing divisions.
  std::vector<double> le_fluid(scene.domains.size());
  std::vector<double> le_wall(scene.walls.size());
  for (size_t i = 0; i < scene.domains.size(); ++i)
    le_fluid[i] = round_to(
        element_length(domain_wavelength(scene.domains[i], f_max),
                       cfg.nodes_per_wavelength),
        2);
  for (size_t i = 0; i < scene.walls.size(); ++i)
    le_wall[i] = round_to(
        element_length(
            wavelength_bending(scene.walls[i].medium, scene.walls[i].patch.h, f_max),
            cfg.nodes_per_wavelength),
        2);
  if (cfg.mesh_mode == MeshMode::conforming) {
    double l_min = *std::min_element(le_fluid.begin(), le_fluid.end());
    for (double l : le_wall) l_min = std::min(l_min, l);
    std::fill(le_fluid.begin(), le_fluid.end(), l_min);
    std::fill(le_wall.begin(), le_wall.end(), l_min);
  }

  for (size_t i = 0; i < scene.domains.size(); ++i) {
    FluidDomain& d = scene.domains[i];
    d.l_e = le_fluid[i];
    d.block = mesh_fluid_box(d.block.origin, d.block.extent, d.l_e);
  }
  for (size_t i = 0; i < scene.walls.size(); ++i) {
    WallDomain& w = scene.walls[i];
    w.l_e = le_wall[i];
    double h = w.patch.h;
    w.patch = mesh_shell_patch(w.patch.origin, {0.0, 1.0, 0.0}, {0.0, 0.0, 1.0},
                               {ly, lz}, w.l_e, h);
  }

  // Wall-fluid interfaces; the sign is +1 when the fluid sits on the +x side
  // of the wall mid-plane.
  auto add_interface = [&](const std::string& wall, const std::string& dom,
                           double sign) {
    InterfaceDescriptor ic;
    for (size_t i = 0; i < scene.walls.size(); ++i)
      if (scene.walls[i].name == wall) ic.wall = static_cast<int>(i);
    ic.domain = scene.domain_index(dom);
    ic.normal_sign = sign;
    const WallDomain& w = scene.walls[static_cast<size_t>(ic.wall)];
    const FluidDomain& d = scene.domains[static_cast<size_t>(ic.domain)];
    ic.conforming = w.patch.divisions[0] == d.block.divisions[1] &&
                    w.patch.divisions[1] == d.block.divisions[2];
    scene.interfaces.push_back(ic);
  };
  if (cfg.gap.present) {
    add_interface("W_RR", "G", -1.0);
    add_interface("W_RR", "RR", 1.0);
    add_interface("W_SR", "SR", -1.0);
    add_interface("W_SR", "G", 1.0);
  } else {
    add_interface("W", "SR", -1.0);
    add_interface("W", "RR", 1.0);
  }

  // Source and microphone sets (receiving-room positions are room-local).
  int i_sr = scene.domain_index("SR");
  int i_rr = scene.domain_index("RR");
  if (cfg.source_positions.empty())
    throw ConfigError("config: at least one source position is required");
  scene.sets.push_back(snap_set("sources", SetRole::source, i_sr,
                                scene.domains[static_cast<size_t>(i_sr)],
                                cfg.source_positions));
  scene.sets.push_back(snap_set("mics_SR", SetRole::microphone, i_sr,
                                scene.domains[static_cast<size_t>(i_sr)],
                                cfg.mics_source_room));
  std::vector<std::array<double, 3>> rr_mics = cfg.mics_receiving_room;
  for (auto& p : rr_mics) p[0] += offset;
  scene.sets.push_back(snap_set("mics_RR", SetRole::microphone, i_rr,
                                scene.domains[static_cast<size_t>(i_rr)],
                                rr_mics));
  for (size_t i = 0; i < scene.walls.size(); ++i) {
    NodeSet s;
    s.name = "clamped_" + scene.walls[i].name;
    s.role = SetRole::clamped;
    s.on_wall = true;
    s.owner = static_cast<int>(i);
    s.ids = scene.walls[i].patch.boundary_nodes();
    scene.sets.push_back(s);
  }
  return scene;
}

void write_mesh(const Scene& scene, std::ostream& os) {
  os << "# mesh export: coupled room-wall-room scene\n";
  os << "sized_for_Hz " << scene.f_sizing << "\n";
  for (const FluidDomain& d : scene.domains) {
    os << "fluid " << d.name << " kind "
       << (d.kind == FluidKind::air ? "air" : "porous") << " l_e " << d.l_e
       << " nodes " << d.block.node_count() << " elements "
       << d.block.elements.size() << "\n";
    os << "nodes\n";
    for (size_t i = 0; i < d.block.nodes.size(); ++i)
      os << i << ' ' << d.block.nodes[i][0] << ' ' << d.block.nodes[i][1] << ' '
         << d.block.nodes[i][2] << "\n";
    os << "elements\n";
    for (size_t e = 0; e < d.block.elements.size(); ++e) {
      os << e;
      for (int n : d.block.elements[e]) os << ' ' << n;
      os << "\n";
    }
  }
  for (const WallDomain& w : scene.walls) {
    os << "wall " << w.name << " h " << w.patch.h << " l_e " << w.l_e
       << " nodes " << w.patch.node_count() << " elements "
       << w.patch.elements.size() << "\n";
    os << "nodes\n";
    for (size_t i = 0; i < w.patch.nodes.size(); ++i)
      os << i << ' ' << w.patch.nodes[i][0] << ' ' << w.patch.nodes[i][1] << ' '
         << w.patch.nodes[i][2] << "\n";
    os << "elements\n";
    for (size_t e = 0; e < w.patch.elements.size(); ++e) {
      os << e;
      for (int n : w.patch.elements[e]) os << ' ' << n;
      os << "\n";
    }
  }
  for (const NodeSet& s : scene.sets) {
    os << "set " << s.name << " role "
       << (s.role == SetRole::source
               ? "source"
               : s.role == SetRole::microphone ? "microphone" : "clamped")
       << " owner "
       << (s.on_wall ? scene.walls[static_cast<size_t>(s.owner)].name
                     : scene.domains[static_cast<size_t>(s.owner)].name)
       << " count " << s.ids.size() << "\n";
    for (size_t i = 0; i < s.ids.size(); ++i) {
      os << s.ids[i];
      if (i < s.drift.size()) os << " drift " << s.drift[i];
      os << "\n";
    }
  }
}

}  // namespace stlfem
