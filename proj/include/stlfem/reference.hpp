#pragma once

#include <vector>

#include "stlfem/materials.hpp"

namespace stlfem {

// Normal-incidence mass-law estimate 20 lg(pi f m'' / (rho0 c)) - 3 dB.
double berger_reduction_index(double f, double m_pp, const FluidMedium& air);

// Plate bending stiffness per unit width E h^3 / (12 (1 - nu^2)).
double bending_stiffness(const SolidMedium& s, double h);

// Coincidence frequency c^2/(2 pi) sqrt(m''/B).
double coincidence_frequency(const SolidMedium& s, double h,
                             const FluidMedium& air);

// Stiffness per unit area of the cavity medium: rho0 c^2 for plain air, the
// real part of the dynamic bulk modulus (evaluated at f_eval) for a porous
// filling.
double gap_stiffness(const FluidMedium& air);
double gap_stiffness(const PorousMedium& p, double f_eval = 1000.0);

// Mass-spring-mass resonance (1/2 pi) sqrt(K/l_g (1/m1 + 1/m2)).
double double_wall_resonance(double m1, double m2, double K, double l_g);

// Guide line with a fixed dB-per-octave slope through (f_anchor, R_anchor).
double octave_slope_guide(double f, double f_anchor, double R_anchor,
                          double dB_per_octave = 12.0);

// First eigenfrequencies of a fully clamped rectangular Kirchhoff plate,
// computed with a Ritz basis of clamped-beam functions (n_basis per
// direction). Results converge from above with growing n_basis.
std::vector<double> clamped_plate_frequencies(const SolidMedium& s, double h,
                                              double a, double b, int count,
                                              int n_basis = 10);

// Frequency response assurance criterion |H1^H H2|^2 / ((H1^H H1)(H2^H H2)).
double frac(const std::vector<cdouble>& H1, const std::vector<cdouble>& H2);

struct FracBand {
  double f_lo = 0.0;
  double f_hi = 0.0;
  double value = 0.0;
  int lines = 0;
};

// FRAC per fixed-width interval over [f_lo, f_hi]; both responses must share
// the frequency grid on that range. Intervals are half-open except the last,
// which includes the upper endpoint.
std::vector<FracBand> frac_report(const std::vector<double>& fA,
                                  const std::vector<cdouble>& HA,
                                  const std::vector<double>& fB,
                                  const std::vector<cdouble>& HB, double f_lo,
                                  double f_hi, double width = 25.0);

// Relative magnitude error (pA - pB)/pA with pA the reference.
double relative_error(double pA, double pB);

struct ErrorSummary {
  double mean = 0.0;
  int used = 0;
  int skipped = 0;  // zero-reference entries excluded from the mean
};
ErrorSummary averaged_relative_error(const std::vector<double>& pA,
                                     const std::vector<double>& pB);

}  // namespace stlfem
