#include <cmath>
#include <map>
#include <utility>

#include "doctest.h"
#include "stlfem/coupling.hpp"
#include "stlfem/scenario.hpp"

using namespace stlfem;

namespace {

std::map<std::pair<int, int>, double> as_map(const CouplingBlock& c) {
  std::map<std::pair<int, int>, double> m;
  for (const auto& e : c.entries) m[{e.s_node, e.f_node}] += e.v;
  return m;
}

// First moment of the coupled pressure trace: sum_v C(s,f) * y_f equals
// sign * integral of y over the interface for any exact quadrature.
double fluid_moment(const CouplingBlock& c, const Scene& scene, int axis) {
  const auto& nodes = scene.domains[static_cast<size_t>(c.domain)].block.nodes;
  double m = 0.0;
  for (const auto& e : c.entries)
    m += e.v * nodes[static_cast<size_t>(e.f_node)][static_cast<size_t>(axis)];
  return m;
}

double wall_moment(const CouplingBlock& c, const Scene& scene, int axis) {
  const auto& nodes = scene.walls[static_cast<size_t>(c.wall)].patch.nodes;
  double m = 0.0;
  for (const auto& e : c.entries)
    m += e.v * nodes[static_cast<size_t>(e.s_node)][static_cast<size_t>(axis)];
  return m;
}

}  // namespace

TEST_SUITE("coupling") {
  TEST_CASE("conforming entries sum to the signed interface area") {
    Scene scene = build_scene(preset("small-slw1"), 500.0);
    double area = 1.05 * 0.72;
    for (const auto& ic : scene.interfaces) {
      REQUIRE(ic.conforming);
      CouplingBlock c = build_coupling(ic, scene);
      CHECK(c.normal_axis == 0);
      CHECK(coupling_entry_sum(c) ==
            doctest::Approx(ic.normal_sign * area).epsilon(1e-12));
    }
  }

  TEST_CASE("first moments are exact on both sides") {
    Scene scene = build_scene(preset("small-slw1"), 500.0);
    double area = 1.05 * 0.72;
    const auto& ic = scene.interfaces.front();
    CouplingBlock c = build_coupling(ic, scene);
    CHECK(fluid_moment(c, scene, 1) ==
          doctest::Approx(ic.normal_sign * area * 0.5 * 1.05).epsilon(1e-12));
    CHECK(fluid_moment(c, scene, 2) ==
          doctest::Approx(ic.normal_sign * area * 0.5 * 0.72).epsilon(1e-12));
    CHECK(wall_moment(c, scene, 2) ==
          doctest::Approx(ic.normal_sign * area * 0.5 * 0.72).epsilon(1e-12));
  }

  TEST_CASE("the descriptor sign encodes which side the fluid is on") {
    Scene scene = build_scene(preset("small-slw1"), 500.0);
    REQUIRE(scene.interfaces.size() == 2);
    const auto& to_sr = scene.interfaces[0];
    const auto& to_rr = scene.interfaces[1];
    CHECK(to_sr.normal_sign == -1.0);
    CHECK(to_rr.normal_sign == 1.0);
    CHECK(coupling_entry_sum(build_coupling(to_sr, scene)) < 0.0);
    CHECK(coupling_entry_sum(build_coupling(to_rr, scene)) > 0.0);
    // A flipped sign claims the fluid face on the far side of the leaf,
    // which does not touch the wall.
    InterfaceDescriptor flipped = to_sr;
    flipped.normal_sign = 1.0;
    CHECK_THROWS_AS(build_coupling(flipped, scene), InterfaceError);
  }

  TEST_CASE("mortar evaluation reduces to the conforming one on matched grids") {
    Scene scene = build_scene(preset("small-slw2"), 400.0);
    for (const auto& ic : scene.interfaces) {
      REQUIRE(ic.conforming);
      auto mc = as_map(conforming_coupling(ic, scene));
      auto mm = as_map(nonconforming_coupling(ic, scene));
      REQUIRE(mc.size() == mm.size());
      double scale = 0.0;
      for (const auto& kv : mc) scale = std::max(scale, std::abs(kv.second));
      for (const auto& kv : mc) {
        REQUIRE(mm.count(kv.first) == 1);
        CHECK(std::abs(mm.at(kv.first) - kv.second) < 1e-12 * scale);
      }
    }
  }

  TEST_CASE("mortar stays exact on mismatched grids") {
    ScenarioConfig cfg = preset("small-dlwi");
    cfg.mesh_mode = MeshMode::domain_specific;
    Scene scene = build_scene(cfg, 1000.0);
    double area = 1.05 * 0.72;
    bool any_mortar = false;
    for (const auto& ic : scene.interfaces) {
      CouplingBlock c = build_coupling(ic, scene);
      CHECK(coupling_entry_sum(c) ==
            doctest::Approx(ic.normal_sign * area).epsilon(1e-10));
      CHECK(fluid_moment(c, scene, 1) ==
            doctest::Approx(ic.normal_sign * area * 0.5 * 1.05).epsilon(1e-10));
      if (!ic.conforming) {
        any_mortar = true;
        CHECK_THROWS_AS(conforming_coupling(ic, scene), ConformityError);
      }
    }
    CHECK(any_mortar);
  }

  TEST_CASE("descriptor pointing at a detached face is rejected") {
    Scene scene = build_scene(preset("small-dlwi"), 500.0);
    // W_RR sits between gap and receiving room; the source room face does
    // not touch it.
    InterfaceDescriptor bad;
    bad.wall = 0;
    bad.domain = scene.domain_index("SR");
    bad.normal_sign = 1.0;
    CHECK_THROWS_AS(build_coupling(bad, scene), InterfaceError);
  }
}
