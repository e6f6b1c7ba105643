#pragma once

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <string>
#include <utility>
#include <vector>

#include "stlfem/coupling.hpp"
#include "stlfem/mesh.hpp"

namespace stlfem {

// Equation numbering: fluid pressures domain by domain in scene order, then
// wall DOFs (6 per node) wall by wall. Clamped wall nodes are excluded from
// the numbering, which eliminates their equations and columns.
struct DofMap {
  std::vector<int> fluid_offset;
  std::vector<int> fluid_count;
  std::vector<std::vector<int>> wall_map;  // node*6+comp -> equation or -1
  int n = 0;

  int fluid_eq(int domain, int node) const {
    return fluid_offset[static_cast<size_t>(domain)] + node;
  }
  int wall_eq(int wall, int node, int comp) const {
    return wall_map[static_cast<size_t>(wall)][static_cast<size_t>(node) * 6 +
                                               static_cast<size_t>(comp)];
  }
};

DofMap build_dof_map(const Scene& scene);

// Unscaled acoustic stiffness/mass of one block on the block's own numbering.
std::pair<Eigen::SparseMatrix<double>, Eigen::SparseMatrix<double>>
fluid_matrices(const FluidBlock& block);

// Real global wall matrices (at real Young's modulus), optionally with the
// clamped perimeter eliminated; eq maps node*6+comp to the reduced numbering.
struct WallMatrices {
  Eigen::SparseMatrix<double> K;
  Eigen::SparseMatrix<double> M;
  std::vector<int> eq;
  int n = 0;
};
WallMatrices wall_matrices(const WallDomain& wall, bool clamp_boundary);

struct SystemMatrices {
  Eigen::SparseMatrix<cdouble> A;
  Eigen::VectorXcd b;
};

// Caches every frequency-independent contribution (fluid K/M blocks, wall
// K/M, coupling blocks) on a merged sparsity pattern so that one frequency
// step reduces to a value copy plus a few scaled accumulations.
class FrequencyAssembler {
 public:
  FrequencyAssembler(const Scene& scene, double Q_s);

  const DofMap& dofs() const { return dofs_; }
  int size() const { return dofs_.n; }

  SystemMatrices make_workspace() const;
  void assemble(double f, SystemMatrices& ws) const;

 private:
  enum class PieceKind { fluid_K, fluid_M, wall_M };
  struct Piece {
    PieceKind kind;
    int owner;
    std::vector<int> pos;
    std::vector<double> val;
  };
  cdouble coefficient(const Piece& p, double omega, double f) const;

  const Scene& scene_;
  double Q_s_;
  DofMap dofs_;
  Eigen::SparseMatrix<cdouble> pattern_;
  std::vector<cdouble> base_;
  std::vector<Piece> pieces_;
  std::vector<int> source_eqs_;
};

// Factor-and-solve with a relative residual guard of 1e-8.
Eigen::VectorXcd solve_direct(const SystemMatrices& ws);

// Reusable solver that keeps the symbolic analysis across frequencies.
// Factorizes a symmetrically equilibrated copy of the operator; solutions and
// residuals refer to the original system.
class DirectSolver {
 public:
  Eigen::VectorXcd solve(const SystemMatrices& ws);

 private:
  Eigen::SparseLU<Eigen::SparseMatrix<cdouble>, Eigen::COLAMDOrdering<int>> lu_;
  Eigen::SparseMatrix<cdouble> scaled_;
  Eigen::VectorXd d_;
  bool analyzed_ = false;
};

// Dense LU cross-check, refused above the given size cap.
Eigen::VectorXcd solve_dense(const SystemMatrices& ws, int max_dof = 2000);

struct SweepOptions {
  int workers = 1;
  bool keep_fields = false;
  bool progress = true;
};

struct FrequencyRecord {
  double f = 0.0;
  bool ok = false;
  std::string error;
  std::vector<cdouble> mic_SR;
  std::vector<cdouble> mic_RR;
  Eigen::VectorXcd field;  // populated only when fields are kept
};

struct SweepResult {
  std::vector<FrequencyRecord> records;
  int n_dof = 0;
  int failures = 0;
  double seconds = 0.0;
};

// Frequency-parallel direct sweep. Results are written into per-frequency
// slots, so the output is identical for any worker count.
SweepResult sweep(const Scene& scene, double Q_s,
                  const std::vector<double>& freqs, const SweepOptions& opts);

// Uniform grid f_lo, f_lo+df, ..., f_hi (both endpoints included).
std::vector<double> frequency_grid(double f_lo, double f_hi, double df);

// Per-interval frequency plan for a multi-interval sweep; each interval is
// meshed for its own upper frequency.
struct IntervalPlan {
  SweepInterval interval;
  std::vector<double> freqs;
};
std::vector<IntervalPlan> plan_intervals(const ScenarioConfig& cfg);

}  // namespace stlfem
