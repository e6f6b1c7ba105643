#include "stlfem/reference.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>

#include "stlfem/elements.hpp"

namespace stlfem {

double berger_reduction_index(double f, double m_pp, const FluidMedium& air) {
  if (f <= 0.0) throw DomainError("mass law: frequency must be positive");
  if (m_pp <= 0.0) throw DomainError("mass law: surface mass must be positive");
  return 20.0 * std::log10(pi * f * m_pp / (air.rho0 * air.c)) - 3.0;
}

double bending_stiffness(const SolidMedium& s, double h) {
  validate(s);
  if (h <= 0.0) throw DomainError("bending stiffness: thickness must be positive");
  return s.E * h * h * h / (12.0 * (1.0 - s.nu * s.nu));
}

double coincidence_frequency(const SolidMedium& s, double h,
                             const FluidMedium& air) {
  const double B = bending_stiffness(s, h);
  const double m_pp = s.rho * h;
  return air.c * air.c / (2.0 * pi) * std::sqrt(m_pp / B);
}

double gap_stiffness(const FluidMedium& air) {
  validate(air);
  return air.rho0 * air.c * air.c;
}

double gap_stiffness(const PorousMedium& p, double f_eval) {
  validate(p);
  if (f_eval <= 0.0)
    throw DomainError("gap stiffness: evaluation frequency must be positive");
  return dynamic_bulk_modulus(p, 2.0 * pi * f_eval).real();
}

double double_wall_resonance(double m1, double m2, double K, double l_g) {
  if (m1 <= 0.0 || m2 <= 0.0)
    throw DomainError("resonance: surface masses must be positive");
  if (K <= 0.0 || l_g <= 0.0)
    throw DomainError("resonance: stiffness and gap depth must be positive");
  const double s = K / l_g;
  return std::sqrt(s * (1.0 / m1 + 1.0 / m2)) / (2.0 * pi);
}

double octave_slope_guide(double f, double f_anchor, double R_anchor,
                          double dB_per_octave) {
  if (f <= 0.0 || f_anchor <= 0.0)
    throw DomainError("guide: frequencies must be positive");
  return R_anchor + dB_per_octave * std::log2(f / f_anchor);
}

namespace {

// Roots of cos(l) cosh(l) = 1 via Newton iteration on cos(l) - sech(l).
double beam_eigenvalue(int m) {
  double l = (m + 0.5) * pi;
  for (int it = 0; it < 60; ++it) {
    double sech = 1.0 / std::cosh(l);
    double g = std::cos(l) - sech;
    double dg = -std::sin(l) + sech * std::tanh(l);
    double step = g / dg;
    l -= step;
    if (std::abs(step) < 1e-14 * l) break;
  }
  return l;
}

// Clamped-clamped beam function on [0,1] in an overflow-free form, together
// with its first two derivatives.
struct BeamBasis {
  double lambda;
  double A, B, sigma;

  explicit BeamBasis(double l) : lambda(l) {
    const double el = std::exp(-l);
    sigma = (std::cosh(l) - std::cos(l)) / (std::sinh(l) - std::sin(l));
    A = (std::cos(l) - std::sin(l) - el) /
        ((1.0 - el * el) - 2.0 * std::sin(l) * el);
    B = 0.5 * (1.0 + sigma);
  }

  double X(double x) const {
    return A * std::exp(-lambda * (1.0 - x)) + B * std::exp(-lambda * x) -
           std::cos(lambda * x) + sigma * std::sin(lambda * x);
  }
  double dX(double x) const {
    return lambda * (A * std::exp(-lambda * (1.0 - x)) -
                     B * std::exp(-lambda * x) + std::sin(lambda * x) +
                     sigma * std::cos(lambda * x));
  }
  double ddX(double x) const {
    return lambda * lambda *
           (A * std::exp(-lambda * (1.0 - x)) + B * std::exp(-lambda * x) +
            std::cos(lambda * x) - sigma * std::sin(lambda * x));
  }
};

// I0 = int X_m X_n, I1 = int X'_m X'_n, I2 = int X''_m X''_n,
// J(m,n) = int X''_m X_n, all on [0,1] by composite Gauss quadrature.
struct BeamIntegrals {
  Eigen::MatrixXd I0, I1, I2, J;
};

BeamIntegrals beam_integrals(const std::vector<BeamBasis>& basis) {
  const int nb = static_cast<int>(basis.size());
  BeamIntegrals out;
  out.I0 = Eigen::MatrixXd::Zero(nb, nb);
  out.I1 = Eigen::MatrixXd::Zero(nb, nb);
  out.I2 = Eigen::MatrixXd::Zero(nb, nb);
  out.J = Eigen::MatrixXd::Zero(nb, nb);

  const int panels = std::max(32, 4 * nb);
  QuadratureRule q = gauss_rule(5, 1);
  for (int p = 0; p < panels; ++p) {
    const double x0 = static_cast<double>(p) / panels;
    const double x1 = static_cast<double>(p + 1) / panels;
    for (size_t g = 0; g < q.points.size(); ++g) {
      const double x = 0.5 * (x0 + x1) + 0.5 * (x1 - x0) * q.points[g][0];
      const double w = 0.5 * (x1 - x0) * q.weights[g];
      Eigen::VectorXd X(nb), dX(nb), ddX(nb);
      for (int m = 0; m < nb; ++m) {
        X(m) = basis[static_cast<size_t>(m)].X(x);
        dX(m) = basis[static_cast<size_t>(m)].dX(x);
        ddX(m) = basis[static_cast<size_t>(m)].ddX(x);
      }
      out.I0.noalias() += w * X * X.transpose();
      out.I1.noalias() += w * dX * dX.transpose();
      out.I2.noalias() += w * ddX * ddX.transpose();
      out.J.noalias() += w * ddX * X.transpose();
    }
  }
  return out;
}

}  // namespace

std::vector<double> clamped_plate_frequencies(const SolidMedium& s, double h,
                                              double a, double b, int count,
                                              int n_basis) {
  validate(s);
  if (h <= 0.0) throw DomainError("plate modes: thickness must be positive");
  if (a <= 0.0 || b <= 0.0)
    throw DomainError("plate modes: edge lengths must be positive");
  if (count < 1) throw DomainError("plate modes: count must be positive");
  if (n_basis < 2 || n_basis * n_basis < count)
    throw DomainError("plate modes: basis too small for the requested count");

  std::vector<BeamBasis> basis;
  basis.reserve(static_cast<size_t>(n_basis));
  for (int m = 1; m <= n_basis; ++m) basis.emplace_back(beam_eigenvalue(m));
  BeamIntegrals bi = beam_integrals(basis);

  const double D = bending_stiffness(s, h);
  const double nu = s.nu;
  const int nb = n_basis;
  const int N = nb * nb;
  Eigen::MatrixXd K(N, N), M(N, N);
  const double a2 = a * a, b2 = b * b;
  for (int mi = 0; mi < nb; ++mi)
    for (int ni = 0; ni < nb; ++ni) {
      const int r = mi * nb + ni;
      for (int mj = 0; mj < nb; ++mj)
        for (int nj = 0; nj < nb; ++nj) {
          const int c = mj * nb + nj;
          double k = bi.I2(mi, mj) * bi.I0(ni, nj) / (a2 * a2) +
                     bi.I0(mi, mj) * bi.I2(ni, nj) / (b2 * b2) +
                     (nu * (bi.J(mi, mj) * bi.J(nj, ni) +
                            bi.J(mj, mi) * bi.J(ni, nj)) +
                      2.0 * (1.0 - nu) * bi.I1(mi, mj) * bi.I1(ni, nj)) /
                         (a2 * b2);
          K(r, c) = D * a * b * k;
          M(r, c) = s.rho * h * a * b * bi.I0(mi, mj) * bi.I0(ni, nj);
        }
    }

  Eigen::GeneralizedSelfAdjointEigenSolver<Eigen::MatrixXd> eig(K, M);
  if (eig.info() != Eigen::Success)
    throw SolverError("plate modes: eigensolve failed");
  std::vector<double> f;
  f.reserve(static_cast<size_t>(count));
  for (int i = 0; i < count; ++i)
    f.push_back(std::sqrt(std::max(0.0, eig.eigenvalues()(i))) / (2.0 * pi));
  return f;
}

double frac(const std::vector<cdouble>& H1, const std::vector<cdouble>& H2) {
  if (H1.empty()) throw DomainError("frac: empty response");
  if (H1.size() != H2.size())
    throw AlignmentError("frac: responses have different lengths");
  cdouble cross{0.0, 0.0};
  double n1 = 0.0, n2 = 0.0;
  for (size_t i = 0; i < H1.size(); ++i) {
    cross += std::conj(H1[i]) * H2[i];
    n1 += std::norm(H1[i]);
    n2 += std::norm(H2[i]);
  }
  if (n1 == 0.0 || n2 == 0.0)
    throw SingularityError("frac: zero response vector");
  return std::norm(cross) / (n1 * n2);
}

std::vector<FracBand> frac_report(const std::vector<double>& fA,
                                  const std::vector<cdouble>& HA,
                                  const std::vector<double>& fB,
                                  const std::vector<cdouble>& HB, double f_lo,
                                  double f_hi, double width) {
  if (fA.size() != HA.size() || fB.size() != HB.size())
    throw DomainError("frac report: grid and response sizes differ");
  if (!(f_hi > f_lo) || !(width > 0.0))
    throw DomainError("frac report: malformed interval");

  auto restrict_range = [&](const std::vector<double>& f,
                            const std::vector<cdouble>& H,
                            std::vector<double>& fr, std::vector<cdouble>& Hr) {
    for (size_t i = 0; i < f.size(); ++i)
      if (f[i] >= f_lo - 1e-9 && f[i] <= f_hi + 1e-9) {
        fr.push_back(f[i]);
        Hr.push_back(H[i]);
      }
  };
  std::vector<double> fa, fb;
  std::vector<cdouble> ha, hb;
  restrict_range(fA, HA, fa, ha);
  restrict_range(fB, HB, fb, hb);
  if (fa.size() != fb.size())
    throw AlignmentError("frac report: frequency grids do not match");
  for (size_t i = 0; i < fa.size(); ++i)
    if (std::abs(fa[i] - fb[i]) > 1e-9)
      throw AlignmentError("frac report: frequency grids do not match");
  if (fa.empty()) throw DomainError("frac report: no lines in range");

  std::vector<FracBand> out;
  const int n_int = static_cast<int>(std::ceil((f_hi - f_lo) / width - 1e-9));
  for (int k = 0; k < n_int; ++k) {
    FracBand band;
    band.f_lo = f_lo + k * width;
    band.f_hi = std::min(f_lo + (k + 1) * width, f_hi);
    const bool last = k == n_int - 1;
    std::vector<cdouble> h1, h2;
    for (size_t i = 0; i < fa.size(); ++i) {
      bool in = fa[i] >= band.f_lo - 1e-9 &&
                (last ? fa[i] <= band.f_hi + 1e-9 : fa[i] < band.f_hi - 1e-9);
      if (in) {
        h1.push_back(ha[i]);
        h2.push_back(hb[i]);
      }
    }
    band.lines = static_cast<int>(h1.size());
    band.value = band.lines > 0 ? frac(h1, h2)
                                : std::numeric_limits<double>::quiet_NaN();
    out.push_back(band);
  }
  return out;
}

double relative_error(double pA, double pB) {
  if (pA == 0.0) return std::numeric_limits<double>::quiet_NaN();
  return (pA - pB) / pA;
}

ErrorSummary averaged_relative_error(const std::vector<double>& pA,
                                     const std::vector<double>& pB) {
  if (pA.size() != pB.size())
    throw AlignmentError("relative error: series lengths differ");
  if (pA.empty()) throw DomainError("relative error: empty series");
  ErrorSummary s;
  double sum = 0.0;
  for (size_t i = 0; i < pA.size(); ++i) {
    double e = relative_error(pA[i], pB[i]);
    if (std::isnan(e)) {
      ++s.skipped;
    } else {
      sum += e;
      ++s.used;
    }
  }
  s.mean = s.used > 0 ? sum / s.used : std::numeric_limits<double>::quiet_NaN();
  return s;
}

}  // namespace stlfem
