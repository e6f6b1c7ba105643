#include "stlfem/elements.hpp"

#include <cmath>

namespace stlfem {

namespace {

struct Rule1D {
  int n;
  const double* x;
  const double* w;
};

const double kX1[] = {0.0};
const double kW1[] = {2.0};
const double kX2[] = {-0.5773502691896257, 0.5773502691896257};
const double kW2[] = {1.0, 1.0};
const double kX3[] = {-0.7745966692414834, 0.0, 0.7745966692414834};
const double kW3[] = {5.0 / 9.0, 8.0 / 9.0, 5.0 / 9.0};
const double kX4[] = {-0.8611363115940526, -0.3399810435848563,
                      0.3399810435848563, 0.8611363115940526};
const double kW4[] = {0.3478548451374538, 0.6521451548625461,
                      0.6521451548625461, 0.3478548451374538};
const double kX5[] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                      0.5384693101056831, 0.9061798459386640};
const double kW5[] = {0.2369268850561891, 0.4786286704993665,
                      0.5688888888888889, 0.4786286704993665,
                      0.2369268850561891};

Rule1D rule_1d(int n) {
  switch (n) {
    case 1: return {1, kX1, kW1};
    case 2: return {2, kX2, kW2};
    case 3: return {3, kX3, kW3};
    case 4: return {4, kX4, kW4};
    case 5: return {5, kX5, kW5};
    default: throw DomainError("quadrature: 1..5 points per direction supported");
  }
}

inline void lag3(double s, double L[3], double dL[3]) {
  L[0] = 0.5 * s * (s - 1.0);
  L[1] = 1.0 - s * s;
  L[2] = 0.5 * s * (s + 1.0);
  dL[0] = s - 0.5;
  dL[1] = -2.0 * s;
  dL[2] = s + 0.5;
}

}  // namespace

QuadratureRule gauss_rule(int n_points, int dim) {
  if (dim < 1 || dim > 3) throw DomainError("quadrature: dim must be 1..3");
  Rule1D r = rule_1d(n_points);
  QuadratureRule q;
  q.dim = dim;
  int nk = dim > 2 ? r.n : 1;
  int nj = dim > 1 ? r.n : 1;
  for (int k = 0; k < nk; ++k)
    for (int j = 0; j < nj; ++j)
      for (int i = 0; i < r.n; ++i) {
        std::array<double, 3> p{r.x[i], dim > 1 ? r.x[j] : 0.0,
                                dim > 2 ? r.x[k] : 0.0};
        double w = r.w[i];
        if (dim > 1) w *= r.w[j];
        if (dim > 2) w *= r.w[k];
        q.points.push_back(p);
        q.weights.push_back(w);
      }
  return q;
}

void hex27_shape(double xi, double eta, double zeta, double N[27],
                 double dN[27][3]) {
  double Lx[3], dLx[3], Ly[3], dLy[3], Lz[3], dLz[3];
  lag3(xi, Lx, dLx);
  lag3(eta, Ly, dLy);
  lag3(zeta, Lz, dLz);
  for (int k = 0; k < 3; ++k)
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i) {
        int l = (k * 3 + j) * 3 + i;
        N[l] = Lx[i] * Ly[j] * Lz[k];
        dN[l][0] = dLx[i] * Ly[j] * Lz[k];
        dN[l][1] = Lx[i] * dLy[j] * Lz[k];
        dN[l][2] = Lx[i] * Ly[j] * dLz[k];
      }
}

void quad9_shape(double xi, double eta, double N[9], double dN[9][2]) {
  double Lx[3], dLx[3], Ly[3], dLy[3];
  lag3(xi, Lx, dLx);
  lag3(eta, Ly, dLy);
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      int l = j * 3 + i;
      N[l] = Lx[i] * Ly[j];
      dN[l][0] = dLx[i] * Ly[j];
      dN[l][1] = Lx[i] * dLy[j];
    }
}

FluidElementMatrices fluid_element(
    const std::array<std::array<double, 3>, 27>& coords) {
  FluidElementMatrices out;
  out.K.setZero();
  out.M.setZero();
  QuadratureRule q = gauss_rule(3, 3);
  double N[27], dN[27][3];
  for (size_t g = 0; g < q.points.size(); ++g) {
    hex27_shape(q.points[g][0], q.points[g][1], q.points[g][2], N, dN);
    Eigen::Matrix3d J = Eigen::Matrix3d::Zero();
    for (int l = 0; l < 27; ++l)
      for (int r = 0; r < 3; ++r)
        for (int c = 0; c < 3; ++c) J(r, c) += dN[l][r] * coords[l][c];
    double detJ = J.determinant();
    if (detJ <= 0.0) throw GeometryError("fluid element: non-positive Jacobian");
    Eigen::Matrix3d Jinv = J.inverse();
    Eigen::Matrix<double, 3, 27> G;
    for (int l = 0; l < 27; ++l) {
      for (int r = 0; r < 3; ++r)
        G(r, l) = Jinv(0, r) * dN[l][0] + Jinv(1, r) * dN[l][1] +
                  Jinv(2, r) * dN[l][2];
    }
    double w = q.weights[g] * detJ;
    out.K.noalias() += w * G.transpose() * G;
    Eigen::Map<Eigen::Matrix<double, 27, 1>> Nv(N);
    out.M.noalias() += w * Nv * Nv.transpose();
  }
  return out;
}

namespace {

// Local DOF index helpers for the 54-DOF shell block ordering.
inline int dof_w(int a) { return 3 * a; }
inline int dof_p1(int a) { return 3 * a + 1; }
inline int dof_p2(int a) { return 3 * a + 2; }
inline int dof_u1(int a) { return 27 + 2 * a; }
inline int dof_u2(int a) { return 27 + 2 * a + 1; }
inline int dof_p3(int a) { return 45 + a; }

// Exact integrals of a quadratic sampled at {-1,0,1} from -1 up to each node.
// Row i of G holds the weights for the running integral ending at node i.
void line_integral_weights(double G[3][3]) {
  G[0][0] = G[0][1] = G[0][2] = 0.0;
  G[1][0] = 5.0 / 12.0;
  G[1][1] = 8.0 / 12.0;
  G[1][2] = -1.0 / 12.0;
  G[2][0] = 1.0 / 3.0;
  G[2][1] = 4.0 / 3.0;
  G[2][2] = 1.0 / 3.0;
}

}  // namespace

ShellElementMatrices shell_element(
    const std::array<std::array<double, 2>, 9>& coords, const SolidMedium& med,
    double h, bool use_dsg) {
  validate(med);
  if (h <= 0.0) throw DomainError("shell element: thickness must be positive");

  // The discrete shear gaps are evaluated along coordinate lines, which
  // requires an axis-aligned rectangle in the local frame.
  const double a = 0.5 * (coords[2][0] - coords[0][0]);
  const double b = 0.5 * (coords[6][1] - coords[0][1]);
  if (a <= 0.0 || b <= 0.0)
    throw GeometryError("shell element: degenerate geometry");
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      int l = j * 3 + i;
      double x = coords[0][0] + a * i;
      double y = coords[0][1] + b * j;
      if (std::abs(coords[l][0] - x) > 1e-9 * (a + b) ||
          std::abs(coords[l][1] - y) > 1e-9 * (a + b))
        throw GeometryError("shell element: nodes must form a regular rectangle");
    }

  const double E = med.E, nu = med.nu, rho = med.rho;
  const double Dm = E * h / (1.0 - nu * nu);
  const double Db = E * h * h * h / (12.0 * (1.0 - nu * nu));
  const double G = E / (2.0 * (1.0 + nu));
  const double ks = 5.0 / 6.0;
  const double Ds = ks * G * h;
  const double rot_inertia = rho * h * h * h / 12.0;

  Eigen::Matrix3d Cm, Cb;
  Cm << 1.0, nu, 0.0, nu, 1.0, 0.0, 0.0, 0.0, 0.5 * (1.0 - nu);
  Cb = Cm * Db;
  Cm *= Dm;
  Eigen::Matrix2d Cs = Eigen::Matrix2d::Identity() * Ds;

  // Shear-gap weight matrices: gap_xi = Gw * w + a * Gp * phi1 (per node),
  // and the eta-direction analogue with b and phi2.
  double I3[3][3];
  line_integral_weights(I3);
  Eigen::Matrix<double, 9, 9> Gw = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 9, 9> Gp = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 9, 9> Hw = Eigen::Matrix<double, 9, 9>::Zero();
  Eigen::Matrix<double, 9, 9> Hp = Eigen::Matrix<double, 9, 9>::Zero();
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i) {
      int l = j * 3 + i;
      Gw(l, l) += 1.0;
      Gw(l, j * 3) -= 1.0;
      for (int m = 0; m < 3; ++m) Gp(l, j * 3 + m) += I3[i][m];
      Hw(l, l) += 1.0;
      Hw(l, i) -= 1.0;
      for (int m = 0; m < 3; ++m) Hp(l, m * 3 + i) += I3[j][m];
    }

  ShellElementMatrices out;
  out.K.setZero();
  out.M.setZero();

  QuadratureRule q = gauss_rule(3, 2);
  double N[9], dN[9][2];
  for (size_t g = 0; g < q.points.size(); ++g) {
    const double xi = q.points[g][0], eta = q.points[g][1];
    quad9_shape(xi, eta, N, dN);
    const double w = q.weights[g] * a * b;

    // Physical derivatives on the rectangle.
    double dNx[9], dNy[9];
    for (int l = 0; l < 9; ++l) {
      dNx[l] = dN[l][0] / a;
      dNy[l] = dN[l][1] / b;
    }

    // Membrane strains.
    Eigen::Matrix<double, 3, 54> Bm = Eigen::Matrix<double, 3, 54>::Zero();
    for (int l = 0; l < 9; ++l) {
      Bm(0, dof_u1(l)) = dNx[l];
      Bm(1, dof_u2(l)) = dNy[l];
      Bm(2, dof_u1(l)) = dNy[l];
      Bm(2, dof_u2(l)) = dNx[l];
    }

    // Curvatures.
    Eigen::Matrix<double, 3, 54> Bb = Eigen::Matrix<double, 3, 54>::Zero();
    for (int l = 0; l < 9; ++l) {
      Bb(0, dof_p1(l)) = dNx[l];
      Bb(1, dof_p2(l)) = dNy[l];
      Bb(2, dof_p1(l)) = dNy[l];
      Bb(2, dof_p2(l)) = dNx[l];
    }

    // Transverse shear.
    Eigen::Matrix<double, 2, 54> Bs = Eigen::Matrix<double, 2, 54>::Zero();
    if (use_dsg) {
      for (int m = 0; m < 9; ++m) {
        double gx_w = 0.0, gx_p = 0.0, gy_w = 0.0, gy_p = 0.0;
        for (int l = 0; l < 9; ++l) {
          gx_w += dN[l][0] * Gw(l, m);
          gx_p += dN[l][0] * Gp(l, m);
          gy_w += dN[l][1] * Hw(l, m);
          gy_p += dN[l][1] * Hp(l, m);
        }
        Bs(0, dof_w(m)) = gx_w / a;
        Bs(0, dof_p1(m)) = gx_p;
        Bs(1, dof_w(m)) = gy_w / b;
        Bs(1, dof_p2(m)) = gy_p;
      }
    } else {
      for (int l = 0; l < 9; ++l) {
        Bs(0, dof_w(l)) = dNx[l];
        Bs(0, dof_p1(l)) = N[l];
        Bs(1, dof_w(l)) = dNy[l];
        Bs(1, dof_p2(l)) = N[l];
      }
    }

    out.K.noalias() += w * (Bm.transpose() * Cm * Bm);
    out.K.noalias() += w * (Bb.transpose() * Cb * Bb);
    out.K.noalias() += w * (Bs.transpose() * Cs * Bs);

    for (int l = 0; l < 9; ++l)
      for (int m = 0; m < 9; ++m) {
        double nn = w * N[l] * N[m];
        out.M(dof_w(l), dof_w(m)) += rho * h * nn;
        out.M(dof_u1(l), dof_u1(m)) += rho * h * nn;
        out.M(dof_u2(l), dof_u2(m)) += rho * h * nn;
        out.M(dof_p1(l), dof_p1(m)) += rot_inertia * nn;
        out.M(dof_p2(l), dof_p2(m)) += rot_inertia * nn;
      }
  }

  // Drilling stabilisation proportional to the mean rotational diagonal.
  double k_rot = 0.0, m_rot = 0.0;
  for (int l = 0; l < 9; ++l) {
    k_rot += out.K(dof_p1(l), dof_p1(l)) + out.K(dof_p2(l), dof_p2(l));
    m_rot += out.M(dof_p1(l), dof_p1(l)) + out.M(dof_p2(l), dof_p2(l));
  }
  k_rot /= 18.0;
  m_rot /= 18.0;
  for (int l = 0; l < 9; ++l) {
    out.K(dof_p3(l), dof_p3(l)) = 1e-4 * k_rot;
    out.M(dof_p3(l), dof_p3(l)) = 1e-4 * m_rot;
  }
  return out;
}

Eigen::Matrix<double, 54, 54> shell_dof_map(const std::array<double, 3>& axis_a,
                                            const std::array<double, 3>& axis_b,
                                            const std::array<double, 3>& normal) {
  // Columns of R are the local axes expressed in global coordinates, so a
  // local vector v_l maps to v_g = R v_l and v_l = R^T v_g.
  Eigen::Matrix3d R;
  for (int r = 0; r < 3; ++r) {
    R(r, 0) = axis_a[r];
    R(r, 1) = axis_b[r];
    R(r, 2) = normal[r];
  }
  Eigen::Matrix<double, 54, 54> Q = Eigen::Matrix<double, 54, 54>::Zero();
  for (int nde = 0; nde < 9; ++nde) {
    int gu = 6 * nde;      // global translations
    int gr = 6 * nde + 3;  // global rotations
    for (int gaxis = 0; gaxis < 3; ++gaxis) {
      Q(dof_u1(nde), gu + gaxis) = R(gaxis, 0);
      Q(dof_u2(nde), gu + gaxis) = R(gaxis, 1);
      Q(dof_w(nde), gu + gaxis) = R(gaxis, 2);
      Q(dof_p1(nde), gr + gaxis) = R(gaxis, 0);
      Q(dof_p2(nde), gr + gaxis) = R(gaxis, 1);
      Q(dof_p3(nde), gr + gaxis) = R(gaxis, 2);
    }
  }
  return Q;
}

Eigen::Matrix<cdouble, 9, 9> boundary_admittance(
    const std::array<std::array<double, 3>, 9>& coords, double omega,
    const FluidMedium& medium, cdouble Z_n) {
  if (omega <= 0.0) throw DomainError("admittance: omega must be positive");
  if (std::abs(Z_n) == 0.0)
    throw SingularityError("admittance: impedance must be nonzero");
  Eigen::Matrix<double, 9, 9> S = Eigen::Matrix<double, 9, 9>::Zero();
  QuadratureRule q = gauss_rule(3, 2);
  double N[9], dN[9][2];
  for (size_t g = 0; g < q.points.size(); ++g) {
    quad9_shape(q.points[g][0], q.points[g][1], N, dN);
    Eigen::Vector3d t1 = Eigen::Vector3d::Zero(), t2 = Eigen::Vector3d::Zero();
    for (int l = 0; l < 9; ++l)
      for (int r = 0; r < 3; ++r) {
        t1(r) += dN[l][0] * coords[l][r];
        t2(r) += dN[l][1] * coords[l][r];
      }
    double dA = t1.cross(t2).norm();
    if (dA <= 0.0) throw GeometryError("admittance: degenerate face");
    double w = q.weights[g] * dA;
    Eigen::Map<Eigen::Matrix<double, 9, 1>> Nv(N);
    S.noalias() += w * Nv * Nv.transpose();
  }
  const double k = omega / medium.c;
  const cdouble factor = cdouble{0.0, 1.0} * k * medium.rho0 * medium.c / Z_n;
  return factor * S.cast<cdouble>();
}

}  // namespace stlfem
