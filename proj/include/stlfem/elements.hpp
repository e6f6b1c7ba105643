#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

#include "stlfem/materials.hpp"

namespace stlfem {

// Tensor-product Gauss-Legendre rule with n points per direction.
struct QuadratureRule {
  int dim = 1;
  std::vector<std::array<double, 3>> points;  // unused trailing coords are 0
  std::vector<double> weights;
};
QuadratureRule gauss_rule(int n_points, int dim);

// Tri-quadratic Lagrange shape functions, local node l = (k*3+j)*3+i with the
// first index fastest; nodes on {-1,0,1}^dim.
void hex27_shape(double xi, double eta, double zeta, double N[27],
                 double dN[27][3]);
void quad9_shape(double xi, double eta, double N[9], double dN[9][2]);

// Unscaled acoustic element matrices: K = int grad(N)^T grad(N) dV,
// M = int N^T N dV. Frequency and material scalings are applied on assembly.
struct FluidElementMatrices {
  Eigen::Matrix<double, 27, 27> K;
  Eigen::Matrix<double, 27, 27> M;
};
FluidElementMatrices fluid_element(
    const std::array<std::array<double, 3>, 27>& coords);

// Local shell DOF ordering (54 per element):
//   0..26   plate block, node a -> (3a: u3, 3a+1: phi1, 3a+2: phi2)
//   27..44  membrane block, node a -> (27+2a: u1, 27+2a+1: u2)
//   45..53  drilling block, node a -> 45+a: phi3
// K is evaluated at the real Young's modulus; the structural loss factor
// enters as a (1 + i eta_s) scaling at assembly time.
struct ShellElementMatrices {
  Eigen::Matrix<double, 54, 54> K;
  Eigen::Matrix<double, 54, 54> M;
};

// Rectangular 9-node Mindlin shell element in local in-plane coordinates.
// use_dsg selects the discrete-shear-gap treatment of transverse shear;
// disabling it keeps the directly interpolated shear strains.
ShellElementMatrices shell_element(
    const std::array<std::array<double, 2>, 9>& coords, const SolidMedium& med,
    double h, bool use_dsg = true);

// Map from global node-major DOFs (ux,uy,uz,rx,ry,rz per node) to the local
// block ordering: x_local = Q x_global, K_global = Q^T K_local Q.
Eigen::Matrix<double, 54, 54> shell_dof_map(const std::array<double, 3>& axis_a,
                                            const std::array<double, 3>& axis_b,
                                            const std::array<double, 3>& normal);

// Robin boundary matrix (i k rho0 c / Z_n) * surface integral of N^T N over a
// 9-node face given by its 3-D coordinates; k = omega / c.
Eigen::Matrix<cdouble, 9, 9> boundary_admittance(
    const std::array<std::array<double, 3>, 9>& coords, double omega,
    const FluidMedium& medium, cdouble Z_n);

}  // namespace stlfem
