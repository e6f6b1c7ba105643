#include <cmath>
#include <sstream>

#include "doctest.h"
#include "stlfem/mesh.hpp"
#include "stlfem/scenario.hpp"

using namespace stlfem;

namespace {

ScenarioConfig two_room_config() {
  ScenarioConfig cfg = preset("small-slw1");
  return cfg;
}

}  // namespace

TEST_SUITE("mesh") {
  TEST_CASE("element length targets two elements per wavelength slice") {
    // n nodes per wavelength on quadratic elements: l_e = 2 lambda / (n - 1).
    CHECK(element_length(1.0, 13) == doctest::Approx(2.0 / 12.0));
    CHECK(element_length(0.5442, 7) == doctest::Approx(2.0 * 0.5442 / 6.0));
    CHECK_THROWS_AS(element_length(1.0, 2), DomainError);
    CHECK_THROWS_AS(element_length(0.0, 13), DomainError);
  }

  TEST_CASE("fluid box structure") {
    FluidBlock b = mesh_fluid_box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 0.5);
    CHECK(b.divisions == std::array<int, 3>{2, 2, 2});
    CHECK(b.nnode == std::array<int, 3>{5, 5, 5});
    CHECK(b.node_count() == 125);
    CHECK(b.nodes.size() == 125);
    CHECK(b.elements.size() == 8);
    // Lexicographic node layout, x fastest.
    CHECK(b.nodes[0] == std::array<double, 3>{0.0, 0.0, 0.0});
    CHECK(b.nodes[1][0] == doctest::Approx(0.25));
    CHECK(b.nodes[5][1] == doctest::Approx(0.25));
    CHECK(b.nodes[25][2] == doctest::Approx(0.25));
    CHECK(b.nodes.back() == std::array<double, 3>{1.0, 1.0, 1.0});
  }

  TEST_CASE("division counts round up without epsilon traps") {
    FluidBlock b = mesh_fluid_box({0.0, 0.0, 0.0}, {5.0, 4.0, 3.0}, 0.19);
    CHECK(b.divisions == std::array<int, 3>{27, 22, 16});
    // 0.6/0.2 must give exactly 3 elements, not 4.
    FluidBlock c = mesh_fluid_box({0.0, 0.0, 0.0}, {0.6, 0.6, 0.6}, 0.2);
    CHECK(c.divisions == std::array<int, 3>{3, 3, 3});
  }

  TEST_CASE("element connectivity covers the block exactly once") {
    FluidBlock b = mesh_fluid_box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 0.5);
    std::vector<int> hits(b.nodes.size(), 0);
    for (const auto& el : b.elements)
      for (int id : el) {
        REQUIRE(id >= 0);
        REQUIRE(id < static_cast<int>(b.nodes.size()));
        ++hits[static_cast<size_t>(id)];
      }
    // Corner node of the block belongs to exactly one element.
    CHECK(hits[0] == 1);
    // Center node of the block belongs to all eight.
    CHECK(hits[static_cast<size_t>(b.node_id(2, 2, 2))] == 8);
    for (int h : hits) CHECK(h >= 1);
  }

  TEST_CASE("shell patch structure and boundary") {
    ShellPatch p = mesh_shell_patch({0.0, 0.0, 0.0}, {0.0, 1.0, 0.0},
                                    {0.0, 0.0, 1.0}, {4.0, 3.0}, 0.09, 0.05);
    CHECK(p.divisions == std::array<int, 2>{45, 34});
    CHECK(p.node_count() == 91 * 69);
    CHECK(p.normal == std::array<double, 3>{1.0, 0.0, 0.0});
    CHECK(p.h == 0.05);
    auto bd = p.boundary_nodes();
    CHECK(bd.size() == 2u * (91 + 69) - 4);
  }

  TEST_CASE("snap picks the nearest node, lowest id on ties") {
    FluidBlock b = mesh_fluid_box({0.0, 0.0, 0.0}, {1.0, 1.0, 1.0}, 0.5);
    CHECK(snap_to_node(b.nodes, {0.0, 0.0, 0.0}) == 0);
    CHECK(snap_to_node(b.nodes, {0.26, 0.0, 0.0}) == 1);
    // Exactly between nodes 0 and 1: the lower id wins.
    CHECK(snap_to_node(b.nodes, {0.125, 0.0, 0.0}) == 0);
    CHECK(snap_to_node(b.nodes, {1.0, 1.0, 1.0}) ==
          static_cast<int>(b.nodes.size()) - 1);
  }

  TEST_CASE("single-wall scene layout") {
    ScenarioConfig cfg = two_room_config();
    Scene scene = build_scene(cfg, 200.0);
    REQUIRE(scene.domains.size() == 2);
    REQUIRE(scene.walls.size() == 1);
    REQUIRE(scene.interfaces.size() == 2);
    CHECK(scene.domain_index("SR") >= 0);
    CHECK(scene.domain_index("RR") >= 0);
    const FluidDomain& sr = scene.domains[static_cast<size_t>(scene.domain_index("SR"))];
    const FluidDomain& rr = scene.domains[static_cast<size_t>(scene.domain_index("RR"))];
    // Source room occupies [0, 0.56], receiving room starts at the wall plane.
    CHECK(sr.block.origin[0] == 0.0);
    CHECK(sr.block.extent[0] == doctest::Approx(0.56));
    CHECK(rr.block.origin[0] == doctest::Approx(0.56));
    const WallDomain& w = scene.walls[0];
    CHECK(w.patch.origin[0] == doctest::Approx(0.56));
    // Wall normal points into the receiving room (+x by construction).
    CHECK(w.patch.normal[0] == doctest::Approx(1.0));
    CHECK(scene.f_sizing == 200.0);
  }

  TEST_CASE("double-wall scene layout with gap") {
    ScenarioConfig cfg = preset("small-dlwi");
    Scene scene = build_scene(cfg, 300.0);
    REQUIRE(scene.domains.size() == 3);
    REQUIRE(scene.walls.size() == 2);
    REQUIRE(scene.interfaces.size() == 4);
    const FluidDomain& g = scene.domains[static_cast<size_t>(scene.domain_index("G"))];
    CHECK(g.kind == FluidKind::porous);
    CHECK(g.block.origin[0] == doctest::Approx(0.56));
    CHECK(g.block.extent[0] == doctest::Approx(0.01));
    const FluidDomain& rr = scene.domains[static_cast<size_t>(scene.domain_index("RR"))];
    CHECK(rr.block.origin[0] == doctest::Approx(0.57));
    CHECK(rr.block.extent[0] == doctest::Approx(0.62));
  }

  TEST_CASE("conforming mode forces one global edge length") {
    ScenarioConfig cfg = preset("small-dlwi");
    Scene scene = build_scene(cfg, 300.0);  // preset is conforming
    double l0 = scene.domains[0].l_e;
    for (const FluidDomain& d : scene.domains) CHECK(d.l_e == l0);
    for (const WallDomain& w : scene.walls) CHECK(w.l_e == l0);
    for (const InterfaceDescriptor& ic : scene.interfaces) CHECK(ic.conforming);
  }

  TEST_CASE("domain-specific mode keeps per-domain lengths") {
    ScenarioConfig cfg = preset("small-dlwi");
    cfg.mesh_mode = MeshMode::domain_specific;
    Scene scene = build_scene(cfg, 300.0);
    const FluidDomain& g = scene.domains[static_cast<size_t>(scene.domain_index("G"))];
    const FluidDomain& sr = scene.domains[static_cast<size_t>(scene.domain_index("SR"))];
    CHECK(g.l_e < sr.l_e);
    bool any_mortar = false;
    for (const InterfaceDescriptor& ic : scene.interfaces)
      any_mortar = any_mortar || !ic.conforming;
    CHECK(any_mortar);
  }

  TEST_CASE("microphone positions in the receiving room are room-local") {
    ScenarioConfig cfg = two_room_config();
    Scene scene = build_scene(cfg, 200.0);
    const NodeSet& mics = scene.set("mics_RR");
    REQUIRE(mics.ids.size() == cfg.mics_receiving_room.size());
    const FluidDomain& rr = scene.domains[static_cast<size_t>(mics.owner)];
    CHECK(rr.name == "RR");
    for (size_t i = 0; i < mics.ids.size(); ++i) {
      const auto& q = rr.block.nodes[static_cast<size_t>(mics.ids[i])];
      // Requested positions carry the absolute offset already applied.
      CHECK(mics.requested[i][0] ==
            doctest::Approx(cfg.mics_receiving_room[i][0] + 0.56));
      double dx = q[0] - mics.requested[i][0];
      double dy = q[1] - mics.requested[i][1];
      double dz = q[2] - mics.requested[i][2];
      CHECK(std::sqrt(dx * dx + dy * dy + dz * dz) ==
            doctest::Approx(mics.drift[i]).epsilon(1e-12));
    }
  }

  TEST_CASE("snap drift stays under half an element") {
    ScenarioConfig cfg = two_room_config();
    Scene scene = build_scene(cfg, 500.0);
    for (const NodeSet& s : scene.sets) {
      if (s.role == SetRole::clamped) continue;
      const FluidDomain& d = scene.domains[static_cast<size_t>(s.owner)];
      double cap = 0.5 * std::sqrt(3.0) * 0.5 * d.l_e + 1e-12;
      for (double g : s.drift) CHECK(g <= cap);
    }
  }

  TEST_CASE("positions outside their room are rejected") {
    ScenarioConfig cfg = two_room_config();
    cfg.source_positions.push_back({2.0, 0.1, 0.1});
    CHECK_THROWS_AS(build_scene(cfg, 200.0), DomainError);
  }

  TEST_CASE("cross sections must match across the construction") {
    ScenarioConfig cfg = two_room_config();
    cfg.receiving_room.dims[1] = 1.00;
    CHECK_THROWS_AS(build_scene(cfg, 200.0), GeometryError);
  }

  TEST_CASE("clamped set lists exactly the wall boundary") {
    ScenarioConfig cfg = two_room_config();
    Scene scene = build_scene(cfg, 200.0);
    const NodeSet& cl = scene.set("clamped_W");
    CHECK(cl.role == SetRole::clamped);
    CHECK(cl.on_wall);
    const ShellPatch& p = scene.walls[static_cast<size_t>(cl.owner)].patch;
    CHECK(cl.ids.size() == 2u * (p.nnode[0] + p.nnode[1]) - 4);
  }

  TEST_CASE("mesh export lists every block") {
    ScenarioConfig cfg = two_room_config();
    Scene scene = build_scene(cfg, 100.0);
    std::ostringstream os;
    write_mesh(scene, os);
    std::string text = os.str();
    CHECK(text.find("fluid SR") != std::string::npos);
    CHECK(text.find("fluid RR") != std::string::npos);
    CHECK(text.find("wall W") != std::string::npos);
    CHECK(text.find("set sources") != std::string::npos);
  }
}
