#pragma once

#include "stlfem/common.hpp"

namespace stlfem {

// Homogeneous fluid with atmospheric state used for absorption models.
struct FluidMedium {
  double c = 343.0;       // speed of sound, m/s
  double rho0 = 1.2041;   // density, kg/m^3
  double gamma = 1.4;     // ratio of specific heats
  double mu = 18.1e-6;    // dynamic viscosity, Pa s
  double Pr = 0.7039;     // Prandtl number
  double P0 = 101325.0;   // static pressure, Pa
  double T_K = 293.15;    // temperature, K
  double h_r = 40.0;      // relative humidity, %
};

// Porous layer described by the five macroscopic flow parameters plus the
// bulk density of the frame; the saturating fluid supplies the gas state.
struct PorousMedium {
  double alpha_inf = 1.0;  // tortuosity
  double Lambda = 0.0;     // viscous characteristic length, m
  double Lambda_p = 0.0;   // thermal characteristic length, m
  double sigma = 0.0;      // static air-flow resistivity, Pa s/m^2
  double phi = 1.0;        // open porosity
  double rho1 = 0.0;       // bulk density of the frame, kg/m^3
  FluidMedium fluid;       // saturating fluid
};

// Isotropic elastic solid with a constant structural loss factor.
struct SolidMedium {
  double E = 0.0;      // Young's modulus, Pa
  double nu = 0.0;     // Poisson ratio
  double rho = 0.0;    // density, kg/m^3
  double eta_s = 0.0;  // structural loss factor
};

enum class DampingKind { none, reverberation, atmospheric };

struct DampingModel {
  DampingKind kind = DampingKind::none;
  double T = 1.5;  // reverberation time, s (reverberation kind only)
};

void validate(const FluidMedium& m);
void validate(const PorousMedium& m);
void validate(const SolidMedium& m);

// Loss factor realising a prescribed reverberation time T at frequency f.
double loss_factor_reverberation(double f, double T);

// Pure-tone atmospheric attenuation coefficient in Np/m (energy form uses
// exp(-m x) for intensity; this is m = alpha_dB * ln(10)/10).
double atmospheric_attenuation(double f, double T_K, double h_r, double P0);

// Loss factor equivalent to propagation attenuation m at frequency f.
double loss_factor_attenuation(double f, double m, double c);

// Dispatch on the damping model; kind==none yields 0.
double loss_factor(const DampingModel& d, const FluidMedium& m, double f);

// Complex speed of sound c(1 + i eta) for the e^{+i omega t} convention.
cdouble complex_speed(double c, double eta);

// Dynamic (complex, frequency-dependent) bulk modulus of the saturating gas
// inside the pores, Pa.
cdouble dynamic_bulk_modulus(const PorousMedium& p, double omega);

// Dynamic density of the rigid-frame equivalent fluid, kg/m^3.
cdouble dynamic_density(const PorousMedium& p, double omega);

// Limp-frame correction of the rigid-frame dynamic density.
cdouble limp_density(cdouble rho_e, const PorousMedium& p);

// Principal-branch complex speed sqrt(K/rho) with Re >= 0.
cdouble equivalent_speed(cdouble K_e, cdouble rho);

// Acoustic wavelength c/f of the plain fluid.
double wavelength_fluid(const FluidMedium& m, double f);

// Re(c_e)/f with the rigid-frame density (used for mesh sizing).
double wavelength_equivalent(const PorousMedium& p, double f);

// Free bending wavelength 2 pi / k_B of a thin plate, k_B = (w^2 m''/B)^{1/4}.
double wavelength_bending(const SolidMedium& s, double h, double f);

}  // namespace stlfem
