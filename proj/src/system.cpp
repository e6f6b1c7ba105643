#include "stlfem/system.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

#include "stlfem/elements.hpp"

namespace stlfem {

DofMap build_dof_map(const Scene& scene) {
  DofMap m;
  int eq = 0;
  for (const FluidDomain& d : scene.domains) {
    m.fluid_offset.push_back(eq);
    m.fluid_count.push_back(d.block.node_count());
    eq += d.block.node_count();
  }
  for (size_t w = 0; w < scene.walls.size(); ++w) {
    const WallDomain& wall = scene.walls[w];
    std::vector<char> clamped(static_cast<size_t>(wall.patch.node_count()), 0);
    for (const NodeSet& s : scene.sets)
      if (s.role == SetRole::clamped && s.on_wall &&
          s.owner == static_cast<int>(w))
        for (int id : s.ids) clamped[static_cast<size_t>(id)] = 1;
    std::vector<int> map(static_cast<size_t>(wall.patch.node_count()) * 6, -1);
    for (int node = 0; node < wall.patch.node_count(); ++node) {
      if (clamped[static_cast<size_t>(node)]) continue;
      for (int comp = 0; comp < 6; ++comp)
        map[static_cast<size_t>(node) * 6 + static_cast<size_t>(comp)] = eq++;
    }
    m.wall_map.push_back(std::move(map));
  }
  m.n = eq;
  return m;
}

namespace {

std::array<std::array<double, 3>, 27> element_coords(const FluidBlock& b,
                                                     size_t e) {
  std::array<std::array<double, 3>, 27> c;
  for (int l = 0; l < 27; ++l)
    c[static_cast<size_t>(l)] =
        b.nodes[static_cast<size_t>(b.elements[e][static_cast<size_t>(l)])];
  return c;
}

}  // namespace

std::pair<Eigen::SparseMatrix<double>, Eigen::SparseMatrix<double>>
fluid_matrices(const FluidBlock& block) {
  const int n = block.node_count();
  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(block.elements.size() * 729);
  tm.reserve(block.elements.size() * 729);
  // Structured blocks have congruent elements; evaluate once and reuse.
  FluidElementMatrices em = fluid_element(element_coords(block, 0));
  for (size_t e = 0; e < block.elements.size(); ++e) {
    const auto& conn = block.elements[e];
    for (int l = 0; l < 27; ++l)
      for (int m2 = 0; m2 < 27; ++m2) {
        tk.emplace_back(conn[static_cast<size_t>(l)],
                        conn[static_cast<size_t>(m2)], em.K(l, m2));
        tm.emplace_back(conn[static_cast<size_t>(l)],
                        conn[static_cast<size_t>(m2)], em.M(l, m2));
      }
  }
  Eigen::SparseMatrix<double> K(n, n), M(n, n);
  K.setFromTriplets(tk.begin(), tk.end());
  M.setFromTriplets(tm.begin(), tm.end());
  return {std::move(K), std::move(M)};
}

WallMatrices wall_matrices(const WallDomain& wall, bool clamp_boundary) {
  WallMatrices out;
  const ShellPatch& p = wall.patch;
  std::vector<char> clamped(static_cast<size_t>(p.node_count()), 0);
  if (clamp_boundary)
    for (int id : p.boundary_nodes()) clamped[static_cast<size_t>(id)] = 1;
  out.eq.assign(static_cast<size_t>(p.node_count()) * 6, -1);
  int n = 0;
  for (int node = 0; node < p.node_count(); ++node) {
    if (clamped[static_cast<size_t>(node)]) continue;
    for (int comp = 0; comp < 6; ++comp)
      out.eq[static_cast<size_t>(node) * 6 + static_cast<size_t>(comp)] = n++;
  }
  out.n = n;

  std::array<std::array<double, 2>, 9> local{};
  const double da = p.extent[0] / p.divisions[0];
  const double db = p.extent[1] / p.divisions[1];
  for (int j = 0; j < 3; ++j)
    for (int i = 0; i < 3; ++i)
      local[static_cast<size_t>(j * 3 + i)] = {0.5 * da * i, 0.5 * db * j};
  ShellElementMatrices em = shell_element(local, wall.medium, p.h, true);
  Eigen::Matrix<double, 54, 54> Q =
      shell_dof_map(p.axis_a, p.axis_b, p.normal);
  Eigen::Matrix<double, 54, 54> Kg = Q.transpose() * em.K * Q;
  Eigen::Matrix<double, 54, 54> Mg = Q.transpose() * em.M * Q;

  std::vector<Eigen::Triplet<double>> tk, tm;
  tk.reserve(p.elements.size() * 54 * 54);
  tm.reserve(p.elements.size() * 54 * 54);
  for (size_t e = 0; e < p.elements.size(); ++e) {
    const auto& conn = p.elements[e];
    for (int l = 0; l < 54; ++l) {
      int rl = out.eq[static_cast<size_t>(conn[static_cast<size_t>(l / 6)]) * 6 +
                      static_cast<size_t>(l % 6)];
      if (rl < 0) continue;
      for (int m2 = 0; m2 < 54; ++m2) {
        int rm = out.eq[static_cast<size_t>(conn[static_cast<size_t>(m2 / 6)]) * 6 +
                        static_cast<size_t>(m2 % 6)];
        if (rm < 0) continue;
        tk.emplace_back(rl, rm, Kg(l, m2));
        tm.emplace_back(rl, rm, Mg(l, m2));
      }
    }
  }
  out.K.resize(n, n);
  out.M.resize(n, n);
  out.K.setFromTriplets(tk.begin(), tk.end());
  out.M.setFromTriplets(tm.begin(), tm.end());
  return out;
}

FrequencyAssembler::FrequencyAssembler(const Scene& scene, double Q_s)
    : scene_(scene), Q_s_(Q_s), dofs_(build_dof_map(scene)) {
  const int n = dofs_.n;
  using SpC = Eigen::SparseMatrix<cdouble>;
  using SpD = Eigen::SparseMatrix<double>;

  std::vector<std::pair<Piece, SpD>> staged;

  // Fluid blocks (one K and one M piece per domain).
  for (size_t d = 0; d < scene.domains.size(); ++d) {
    auto [Kd, Md] = fluid_matrices(scene.domains[d].block);
    const int off = dofs_.fluid_offset[d];
    auto lift = [&](const SpD& X) {
      std::vector<Eigen::Triplet<double>> t;
      t.reserve(static_cast<size_t>(X.nonZeros()));
      for (int c = 0; c < X.outerSize(); ++c)
        for (SpD::InnerIterator it(X, c); it; ++it)
          t.emplace_back(it.row() + off, it.col() + off, it.value());
      SpD Y(n, n);
      Y.setFromTriplets(t.begin(), t.end());
      return Y;
    };
    staged.push_back({{PieceKind::fluid_K, static_cast<int>(d), {}, {}}, lift(Kd)});
    staged.push_back({{PieceKind::fluid_M, static_cast<int>(d), {}, {}}, lift(Md)});
  }

  // Wall blocks; the stiffness is constant up to the loss-factor scaling and
  // is folded into the base values below.
  SpC base(n, n);
  for (size_t w = 0; w < scene.walls.size(); ++w) {
    const WallDomain& wall = scene.walls[w];
    std::array<std::array<double, 2>, 9> local{};
    const double da = wall.patch.extent[0] / wall.patch.divisions[0];
    const double db = wall.patch.extent[1] / wall.patch.divisions[1];
    for (int j = 0; j < 3; ++j)
      for (int i = 0; i < 3; ++i)
        local[static_cast<size_t>(j * 3 + i)] = {0.5 * da * i, 0.5 * db * j};
    ShellElementMatrices em = shell_element(local, wall.medium, wall.patch.h, true);
    Eigen::Matrix<double, 54, 54> Q =
        shell_dof_map(wall.patch.axis_a, wall.patch.axis_b, wall.patch.normal);
    Eigen::Matrix<double, 54, 54> Kg = Q.transpose() * em.K * Q;
    Eigen::Matrix<double, 54, 54> Mg = Q.transpose() * em.M * Q;

    std::vector<Eigen::Triplet<double>> tk, tm;
    for (size_t e = 0; e < wall.patch.elements.size(); ++e) {
      const auto& conn = wall.patch.elements[e];
      for (int l = 0; l < 54; ++l) {
        int rl = dofs_.wall_eq(static_cast<int>(w), conn[static_cast<size_t>(l / 6)],
                               l % 6);
        if (rl < 0) continue;
        for (int m2 = 0; m2 < 54; ++m2) {
          int rm = dofs_.wall_eq(static_cast<int>(w),
                                 conn[static_cast<size_t>(m2 / 6)], m2 % 6);
          if (rm < 0) continue;
          tk.emplace_back(rl, rm, Kg(l, m2));
          tm.emplace_back(rl, rm, Mg(l, m2));
        }
      }
    }
    SpD Kw(n, n), Mw(n, n);
    Kw.setFromTriplets(tk.begin(), tk.end());
    Mw.setFromTriplets(tm.begin(), tm.end());
    base += (cdouble{1.0, wall.medium.eta_s} * Kw.cast<cdouble>()).eval();
    staged.push_back({{PieceKind::wall_M, static_cast<int>(w), {}, {}}, std::move(Mw)});
  }

  // Coupling blocks enter the system as -C on the wall rows and -C^T on the
  // fluid rows, both frequency-independent.
  {
    std::vector<Eigen::Triplet<double>> tc;
    for (const InterfaceDescriptor& ic : scene.interfaces) {
      CouplingBlock cb = build_coupling(ic, scene);
      for (const CouplingEntry& e : cb.entries) {
        int rs = dofs_.wall_eq(cb.wall, e.s_node, cb.normal_axis);
        if (rs < 0) continue;
        int rf = dofs_.fluid_eq(cb.domain, e.f_node);
        tc.emplace_back(rs, rf, -e.v);
        tc.emplace_back(rf, rs, -e.v);
      }
    }
    SpD C(n, n);
    C.setFromTriplets(tc.begin(), tc.end());
    base += C.cast<cdouble>().eval();
  }

  // Merged sparsity pattern over all contributions.
  SpC pat = base;
  for (auto& s : staged) pat += s.second.cast<cdouble>().eval();
  pat.makeCompressed();
  std::fill(pat.valuePtr(), pat.valuePtr() + pat.nonZeros(), cdouble{0.0, 0.0});
  pattern_ = std::move(pat);

  auto value_index = [this](int r, int c) {
    const int* outer = pattern_.outerIndexPtr();
    const int* inner = pattern_.innerIndexPtr();
    const int* lo = inner + outer[c];
    const int* hi = inner + outer[c + 1];
    const int* it = std::lower_bound(lo, hi, r);
    if (it == hi || *it != r)
      throw SolverError("assembly: sparsity pattern lookup failed");
    return static_cast<int>(it - inner);
  };

  base_.assign(static_cast<size_t>(pattern_.nonZeros()), cdouble{0.0, 0.0});
  base.makeCompressed();
  for (int c = 0; c < base.outerSize(); ++c)
    for (SpC::InnerIterator it(base, c); it; ++it)
      base_[static_cast<size_t>(value_index(static_cast<int>(it.row()), c))] =
          it.value();

  for (auto& s : staged) {
    Piece p = std::move(s.first);
    SpD& X = s.second;
    X.makeCompressed();
    p.pos.reserve(static_cast<size_t>(X.nonZeros()));
    p.val.reserve(static_cast<size_t>(X.nonZeros()));
    for (int c = 0; c < X.outerSize(); ++c)
      for (SpD::InnerIterator it(X, c); it; ++it) {
        p.pos.push_back(value_index(static_cast<int>(it.row()), c));
        p.val.push_back(it.value());
      }
    pieces_.push_back(std::move(p));
  }

  for (const NodeSet& s : scene.sets)
    if (s.role == SetRole::source)
      for (int id : s.ids) source_eqs_.push_back(dofs_.fluid_eq(s.owner, id));
}

SystemMatrices FrequencyAssembler::make_workspace() const {
  SystemMatrices ws;
  ws.A = pattern_;
  ws.b = Eigen::VectorXcd::Zero(dofs_.n);
  return ws;
}

cdouble FrequencyAssembler::coefficient(const Piece& p, double omega,
                                        double f) const {
  switch (p.kind) {
    case PieceKind::wall_M:
      return -omega * omega;
    case PieceKind::fluid_K: {
      const FluidDomain& d = scene_.domains[static_cast<size_t>(p.owner)];
      if (d.kind == FluidKind::air)
        return 1.0 / (d.air.rho0 * omega * omega);
      cdouble rho_l = limp_density(dynamic_density(d.porous, omega), d.porous);
      return 1.0 / (rho_l * omega * omega);
    }
    case PieceKind::fluid_M: {
      const FluidDomain& d = scene_.domains[static_cast<size_t>(p.owner)];
      if (d.kind == FluidKind::air) {
        double eta = loss_factor(d.damping, d.air, f);
        cdouble c_hat = complex_speed(d.air.c, eta);
        return -1.0 / (d.air.rho0 * c_hat * c_hat);
      }
      return -1.0 / dynamic_bulk_modulus(d.porous, omega);
    }
  }
  throw SolverError("assembly: unknown piece kind");
}

void FrequencyAssembler::assemble(double f, SystemMatrices& ws) const {
  if (!(f > 0.0)) throw DomainError("assemble: frequency must be positive");
  const double omega = 2.0 * pi * f;
  if (ws.A.nonZeros() != pattern_.nonZeros())
    throw SolverError("assemble: workspace does not match the cached pattern");
  std::copy(base_.begin(), base_.end(), ws.A.valuePtr());
  for (const Piece& p : pieces_) {
    const cdouble coef = coefficient(p, omega, f);
    cdouble* v = ws.A.valuePtr();
    const size_t m = p.pos.size();
    for (size_t i = 0; i < m; ++i) v[p.pos[i]] += coef * p.val[i];
  }
  ws.b.setZero();
  const cdouble load{0.0, Q_s_ / omega};
  for (int eq : source_eqs_) ws.b[eq] += load;
}

namespace {

double one_norm(const Eigen::SparseMatrix<cdouble>& A) {
  double best = 0.0;
  for (int k = 0; k < A.outerSize(); ++k) {
    double col = 0.0;
    for (Eigen::SparseMatrix<cdouble>::InnerIterator it(A, k); it; ++it)
      col += std::abs(it.value());
    best = std::max(best, col);
  }
  return best;
}

// Normwise backward error; the plain residual-over-load ratio is meaningless
// here because the volume-velocity load is minuscule against the resonant
// response (amplification far beyond 1e8 near lightly damped modes).
double backward_error(const Eigen::SparseMatrix<cdouble>& A, double a_norm,
                      const Eigen::VectorXcd& x, const Eigen::VectorXcd& b) {
  double den = a_norm * x.norm() + b.norm();
  return (A * x - b).norm() / (den > 0.0 ? den : 1.0);
}

void residual_check(const Eigen::SparseMatrix<cdouble>& A, double a_norm,
                    const Eigen::VectorXcd& x, const Eigen::VectorXcd& b) {
  double res = backward_error(A, a_norm, x, b);
  if (!(res <= 1e-8)) {
    char msg[96];
    std::snprintf(msg, sizeof msg,
                  "solver: normwise backward error %.3e exceeds 1e-8", res);
    throw SolverError(msg);
  }
}

// The assembled operator spans many orders of magnitude between structure and
// fluid blocks; a few refinement sweeps on the factorization recover the lost
// digits cheaply.
template <class Solve>
void refine(const Eigen::SparseMatrix<cdouble>& A, double a_norm,
            const Eigen::VectorXcd& b, Eigen::VectorXcd& x,
            Solve&& solve_with_factorization) {
  for (int pass = 0; pass < 3; ++pass) {
    if (backward_error(A, a_norm, x, b) <= 1e-12) break;
    Eigen::VectorXcd r = b - A * x;
    x += solve_with_factorization(r);
  }
}

// Symmetric Jacobi scale factors 1/sqrt(|a_ii|); unit weight where the
// diagonal vanishes.
Eigen::VectorXd equilibration(const Eigen::SparseMatrix<cdouble>& A) {
  Eigen::VectorXd d = Eigen::VectorXd::Ones(A.rows());
  for (int k = 0; k < A.outerSize(); ++k)
    for (Eigen::SparseMatrix<cdouble>::InnerIterator it(A, k); it; ++it)
      if (it.row() == it.col()) {
        double a = std::abs(it.value());
        if (a > 0.0) d[it.row()] = 1.0 / std::sqrt(a);
      }
  return d;
}

}  // namespace

Eigen::VectorXcd DirectSolver::solve(const SystemMatrices& ws) {
  d_ = equilibration(ws.A);
  scaled_ = ws.A;
  for (int k = 0; k < scaled_.outerSize(); ++k)
    for (Eigen::SparseMatrix<cdouble>::InnerIterator it(scaled_, k); it; ++it)
      it.valueRef() *= d_[it.row()] * d_[k];
  if (!analyzed_) {
    lu_.analyzePattern(scaled_);
    analyzed_ = true;
  }
  lu_.factorize(scaled_);
  if (lu_.info() != Eigen::Success)
    throw SolverError("solver: sparse LU factorization failed");
  const Eigen::VectorXcd dc = d_.cast<cdouble>();
  Eigen::VectorXcd x = dc.cwiseProduct(lu_.solve(dc.cwiseProduct(ws.b).eval()));
  if (lu_.info() != Eigen::Success)
    throw SolverError("solver: sparse LU back substitution failed");
  const double a_norm = one_norm(ws.A);
  refine(ws.A, a_norm, ws.b, x, [this, &dc](const Eigen::VectorXcd& r) {
    return dc.cwiseProduct(lu_.solve(dc.cwiseProduct(r).eval())).eval();
  });
  residual_check(ws.A, a_norm, x, ws.b);
  return x;
}

Eigen::VectorXcd solve_direct(const SystemMatrices& ws) {
  DirectSolver s;
  return s.solve(ws);
}

Eigen::VectorXcd solve_dense(const SystemMatrices& ws, int max_dof) {
  if (ws.A.rows() > max_dof)
    throw DomainError("dense solver: system exceeds the size cap");
  const Eigen::VectorXcd dc = equilibration(ws.A).cast<cdouble>();
  Eigen::MatrixXcd D(ws.A);
  D = dc.asDiagonal() * D * dc.asDiagonal();
  Eigen::PartialPivLU<Eigen::MatrixXcd> lu(D);
  Eigen::VectorXcd x = dc.cwiseProduct(lu.solve(dc.cwiseProduct(ws.b).eval()));
  const double a_norm = one_norm(ws.A);
  refine(ws.A, a_norm, ws.b, x, [&lu, &dc](const Eigen::VectorXcd& r) {
    return dc.cwiseProduct(lu.solve(dc.cwiseProduct(r).eval())).eval();
  });
  residual_check(ws.A, a_norm, x, ws.b);
  return x;
}

SweepResult sweep(const Scene& scene, double Q_s,
                  const std::vector<double>& freqs, const SweepOptions& opts) {
  auto t0 = std::chrono::steady_clock::now();
  FrequencyAssembler assembler(scene, Q_s);

  std::vector<int> mic_sr, mic_rr;
  for (const NodeSet& s : scene.sets) {
    if (s.role != SetRole::microphone) continue;
    for (int id : s.ids) {
      int eq = assembler.dofs().fluid_eq(s.owner, id);
      if (s.name == "mics_SR") mic_sr.push_back(eq);
      if (s.name == "mics_RR") mic_rr.push_back(eq);
    }
  }

  SweepResult out;
  out.n_dof = assembler.size();
  out.records.resize(freqs.size());

  std::atomic<size_t> next{0};
  std::atomic<int> failures{0};
  std::mutex io;
  const int workers = std::max(1, opts.workers);

  auto work = [&]() {
    SystemMatrices ws = assembler.make_workspace();
    DirectSolver solver;
    for (;;) {
      size_t i = next.fetch_add(1);
      if (i >= freqs.size()) break;
      FrequencyRecord& rec = out.records[i];
      rec.f = freqs[i];
      try {
        assembler.assemble(freqs[i], ws);
        Eigen::VectorXcd x = solver.solve(ws);
        rec.mic_SR.reserve(mic_sr.size());
        for (int eq : mic_sr) rec.mic_SR.push_back(x[eq]);
        rec.mic_RR.reserve(mic_rr.size());
        for (int eq : mic_rr) rec.mic_RR.push_back(x[eq]);
        if (opts.keep_fields) rec.field = std::move(x);
        rec.ok = true;
      } catch (const Error& e) {
        rec.ok = false;
        rec.error = e.what();
        failures.fetch_add(1);
      }
      if (opts.progress) {
        std::lock_guard<std::mutex> lk(io);
        if (rec.ok)
          std::fprintf(stderr, "[sweep] %9.3f Hz ok (%zu/%zu)\n", freqs[i],
                       i + 1, freqs.size());
        else
          std::fprintf(stderr, "[sweep] %9.3f Hz FAILED (%zu/%zu): %s\n",
                       freqs[i], i + 1, freqs.size(), rec.error.c_str());
      }
    }
  };

  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  out.failures = failures.load();
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
                    .count();
  return out;
}

std::vector<double> frequency_grid(double f_lo, double f_hi, double df) {
  if (!(f_lo > 0.0) || !(f_hi >= f_lo))
    throw DomainError("grid: need 0 < f_lo <= f_hi");
  if (!(df > 0.0)) throw DomainError("grid: step must be positive");
  std::vector<double> f;
  const int n = static_cast<int>(std::floor((f_hi - f_lo) / df + 1e-9));
  f.reserve(static_cast<size_t>(n) + 1);
  for (int k = 0; k <= n; ++k) f.push_back(f_lo + k * df);
  return f;
}

std::vector<IntervalPlan> plan_intervals(const ScenarioConfig& cfg) {
  if (cfg.intervals.empty())
    throw ConfigError("sweep: at least one frequency interval is required");
  std::vector<IntervalPlan> out;
  double prev_hi = 0.0;
  for (const SweepInterval& iv : cfg.intervals) {
    if (!(iv.f_lo > 0.0) || !(iv.f_hi >= iv.f_lo))
      throw ConfigError("sweep: malformed frequency interval");
    if (iv.f_lo < prev_hi)
      throw ConfigError("sweep: intervals must be ascending");
    prev_hi = iv.f_hi;
    IntervalPlan p;
    p.interval = iv;
    p.freqs = frequency_grid(iv.f_lo, iv.f_hi, cfg.df);
    out.push_back(std::move(p));
  }
  return out;
}

}  // namespace stlfem
