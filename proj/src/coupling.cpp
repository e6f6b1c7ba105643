#include "stlfem/coupling.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "stlfem/elements.hpp"

namespace stlfem {

namespace {

constexpr double kGeomTol = 1e-9;  // m

struct FacePlan {
  int axis = 0;         // global axis of the wall normal
  int ax1 = 1;          // first in-plane global axis
  int ax2 = 2;          // second in-plane global axis
  int face_index = 0;   // fluid node index along the normal axis
  double sign = 1.0;    // orientation factor applied to all entries
  double o1 = 0.0, o2 = 0.0;      // in-plane origin
  double e1 = 0.0, e2 = 0.0;      // in-plane extents
  int wall_div1 = 0, wall_div2 = 0;
  int fluid_div1 = 0, fluid_div2 = 0;
};

FacePlan face_plan(const InterfaceDescriptor& ic, const Scene& scene) {
  const WallDomain& w = scene.walls.at(static_cast<size_t>(ic.wall));
  const FluidDomain& d = scene.domains.at(static_cast<size_t>(ic.domain));
  FacePlan p;

  p.axis = -1;
  for (int r = 0; r < 3; ++r)
    if (std::abs(std::abs(w.patch.normal[r]) - 1.0) < 1e-12) p.axis = r;
  if (p.axis < 0)
    throw InterfaceError("coupling: wall normal must be axis-aligned");
  p.ax1 = p.axis == 0 ? 1 : 0;
  p.ax2 = p.axis == 2 ? 1 : 2;
  // The patch parameterisation must follow the global in-plane axes.
  if (std::abs(w.patch.axis_a[p.ax1] - 1.0) > 1e-12 ||
      std::abs(w.patch.axis_b[p.ax2] - 1.0) > 1e-12)
    throw InterfaceError("coupling: unsupported wall orientation");

  const double x_wall = w.patch.origin[static_cast<size_t>(p.axis)];
  const double lo = d.block.origin[static_cast<size_t>(p.axis)];
  const double hi = lo + d.block.extent[static_cast<size_t>(p.axis)];
  bool fluid_above = ic.normal_sign * w.patch.normal[p.axis] > 0.0;
  double x_face = fluid_above ? lo : hi;
  if (std::abs(x_face - x_wall) > kGeomTol)
    throw InterfaceError("coupling: wall and fluid face do not coincide");
  p.face_index = fluid_above ? 0 : d.block.nnode[p.axis] - 1;

  // Positive entries correspond to the wall normal pointing into the fluid
  // along the +axis direction.
  p.sign = ic.normal_sign * w.patch.normal[p.axis];

  p.o1 = w.patch.origin[static_cast<size_t>(p.ax1)];
  p.o2 = w.patch.origin[static_cast<size_t>(p.ax2)];
  p.e1 = w.patch.extent[0];
  p.e2 = w.patch.extent[1];
  if (std::abs(d.block.origin[static_cast<size_t>(p.ax1)] - p.o1) > kGeomTol ||
      std::abs(d.block.origin[static_cast<size_t>(p.ax2)] - p.o2) > kGeomTol ||
      std::abs(d.block.extent[static_cast<size_t>(p.ax1)] - p.e1) > kGeomTol ||
      std::abs(d.block.extent[static_cast<size_t>(p.ax2)] - p.e2) > kGeomTol)
    throw InterfaceError("coupling: interface extents do not match");

  p.wall_div1 = w.patch.divisions[0];
  p.wall_div2 = w.patch.divisions[1];
  p.fluid_div1 = d.block.divisions[p.ax1];
  p.fluid_div2 = d.block.divisions[p.ax2];
  return p;
}

int fluid_face_node(const FluidBlock& b, const FacePlan& p, int i1, int i2) {
  int idx[3];
  idx[p.axis] = p.face_index;
  idx[p.ax1] = i1;
  idx[p.ax2] = i2;
  return b.node_id(idx[0], idx[1], idx[2]);
}

CouplingBlock finalize(const InterfaceDescriptor& ic, const FacePlan& p,
                       std::map<std::pair<int, int>, double>& acc) {
  CouplingBlock out;
  out.wall = ic.wall;
  out.domain = ic.domain;
  out.normal_axis = p.axis;
  out.entries.reserve(acc.size());
  for (const auto& kv : acc)
    out.entries.push_back({kv.first.first, kv.first.second, kv.second});
  return out;
}

}  // namespace

CouplingBlock conforming_coupling(const InterfaceDescriptor& ic,
                                  const Scene& scene) {
  const WallDomain& w = scene.walls.at(static_cast<size_t>(ic.wall));
  const FluidDomain& d = scene.domains.at(static_cast<size_t>(ic.domain));
  FacePlan p = face_plan(ic, scene);
  if (p.wall_div1 != p.fluid_div1 || p.wall_div2 != p.fluid_div2)
    throw ConformityError("coupling: face grids are not matched");
  for (int ib = 0; ib < w.patch.nnode[1]; ++ib)
    for (int ia = 0; ia < w.patch.nnode[0]; ++ia) {
      const auto& xs = w.patch.nodes[static_cast<size_t>(w.patch.node_id(ia, ib))];
      const auto& xf =
          d.block.nodes[static_cast<size_t>(fluid_face_node(d.block, p, ia, ib))];
      double dd = 0.0;
      for (int r = 0; r < 3; ++r)
        if (r != p.axis) dd = std::max(dd, std::abs(xs[r] - xf[r]));
      if (dd > kGeomTol)
        throw ConformityError("coupling: matched nodes do not coincide");
    }

  // Per-element face mass matrix on a (da x db) rectangle.
  const double da = p.e1 / p.wall_div1;
  const double db = p.e2 / p.wall_div2;
  Eigen::Matrix<double, 9, 9> S = Eigen::Matrix<double, 9, 9>::Zero();
  QuadratureRule q = gauss_rule(3, 2);
  double N[9], dN[9][2];
  for (size_t g = 0; g < q.points.size(); ++g) {
    quad9_shape(q.points[g][0], q.points[g][1], N, dN);
    Eigen::Map<Eigen::Matrix<double, 9, 1>> Nv(N);
    S.noalias() += (q.weights[g] * da * db / 4.0) * Nv * Nv.transpose();
  }

  std::map<std::pair<int, int>, double> acc;
  for (int eb = 0; eb < p.wall_div2; ++eb)
    for (int ea = 0; ea < p.wall_div1; ++ea)
      for (int j2 = 0; j2 < 3; ++j2)
        for (int i2 = 0; i2 < 3; ++i2)
          for (int j1 = 0; j1 < 3; ++j1)
            for (int i1 = 0; i1 < 3; ++i1) {
              int sn = w.patch.node_id(2 * ea + i1, 2 * eb + j1);
              int fn = fluid_face_node(d.block, p, 2 * ea + i2, 2 * eb + j2);
              acc[{sn, fn}] += p.sign * S(j1 * 3 + i1, j2 * 3 + i2);
            }
  return finalize(ic, p, acc);
}

CouplingBlock nonconforming_coupling(const InterfaceDescriptor& ic,
                                     const Scene& scene) {
  const WallDomain& w = scene.walls.at(static_cast<size_t>(ic.wall));
  const FluidDomain& d = scene.domains.at(static_cast<size_t>(ic.domain));
  FacePlan p = face_plan(ic, scene);

  auto breakpoints = [](double o, double e, int div_w, int div_f) {
    std::vector<double> bp;
    for (int i = 0; i <= div_w; ++i) bp.push_back(o + e * i / div_w);
    for (int i = 0; i <= div_f; ++i) bp.push_back(o + e * i / div_f);
    std::sort(bp.begin(), bp.end());
    bp.erase(std::unique(bp.begin(), bp.end(),
                         [](double a, double b) { return b - a < 1e-12; }),
             bp.end());
    return bp;
  };
  std::vector<double> b1 = breakpoints(p.o1, p.e1, p.wall_div1, p.fluid_div1);
  std::vector<double> b2 = breakpoints(p.o2, p.e2, p.wall_div2, p.fluid_div2);

  auto locate = [](double o, double e, int div, double c) {
    int k = static_cast<int>(std::floor((c - o) / e * div));
    return std::clamp(k, 0, div - 1);
  };

  QuadratureRule q = gauss_rule(3, 2);
  double Nw[9], Nf[9], dNw[9][2], dNf[9][2];
  std::map<std::pair<int, int>, double> acc;
  for (size_t c2 = 0; c2 + 1 < b2.size(); ++c2)
    for (size_t c1 = 0; c1 + 1 < b1.size(); ++c1) {
      const double y0 = b1[c1], y1 = b1[c1 + 1];
      const double z0 = b2[c2], z1 = b2[c2 + 1];
      const double yc = 0.5 * (y0 + y1), zc = 0.5 * (z0 + z1);
      const int ew1 = locate(p.o1, p.e1, p.wall_div1, yc);
      const int ew2 = locate(p.o2, p.e2, p.wall_div2, zc);
      const int ef1 = locate(p.o1, p.e1, p.fluid_div1, yc);
      const int ef2 = locate(p.o2, p.e2, p.fluid_div2, zc);
      const double wy0 = p.o1 + p.e1 * ew1 / p.wall_div1;
      const double wy1 = p.o1 + p.e1 * (ew1 + 1) / p.wall_div1;
      const double wz0 = p.o2 + p.e2 * ew2 / p.wall_div2;
      const double wz1 = p.o2 + p.e2 * (ew2 + 1) / p.wall_div2;
      const double fy0 = p.o1 + p.e1 * ef1 / p.fluid_div1;
      const double fy1 = p.o1 + p.e1 * (ef1 + 1) / p.fluid_div1;
      const double fz0 = p.o2 + p.e2 * ef2 / p.fluid_div2;
      const double fz1 = p.o2 + p.e2 * (ef2 + 1) / p.fluid_div2;
      for (size_t g = 0; g < q.points.size(); ++g) {
        const double y = yc + 0.5 * (y1 - y0) * q.points[g][0];
        const double z = zc + 0.5 * (z1 - z0) * q.points[g][1];
        const double wgt = q.weights[g] * 0.25 * (y1 - y0) * (z1 - z0);
        quad9_shape(2.0 * (y - wy0) / (wy1 - wy0) - 1.0,
                    2.0 * (z - wz0) / (wz1 - wz0) - 1.0, Nw, dNw);
        quad9_shape(2.0 * (y - fy0) / (fy1 - fy0) - 1.0,
                    2.0 * (z - fz0) / (fz1 - fz0) - 1.0, Nf, dNf);
        for (int l = 0; l < 9; ++l) {
          int sn = w.patch.node_id(2 * ew1 + l % 3, 2 * ew2 + l / 3);
          for (int m = 0; m < 9; ++m) {
            int fn = fluid_face_node(d.block, p, 2 * ef1 + m % 3, 2 * ef2 + m / 3);
            acc[{sn, fn}] += p.sign * wgt * Nw[l] * Nf[m];
          }
        }
      }
    }
  return finalize(ic, p, acc);
}

CouplingBlock build_coupling(const InterfaceDescriptor& ic, const Scene& scene) {
  FacePlan p = face_plan(ic, scene);
  if (p.wall_div1 == p.fluid_div1 && p.wall_div2 == p.fluid_div2)
    return conforming_coupling(ic, scene);
  return nonconforming_coupling(ic, scene);
}

double coupling_entry_sum(const CouplingBlock& c) {
  double s = 0.0;
  for (const CouplingEntry& e : c.entries) s += e.v;
  return s;
}

}  // namespace stlfem
