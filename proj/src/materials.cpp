#include "stlfem/materials.hpp"

#include <cmath>

namespace stlfem {

namespace {
constexpr cdouble I{0.0, 1.0};
}

void validate(const FluidMedium& m) {
  if (m.c <= 0.0) throw DomainError("fluid: speed of sound must be positive");
  if (m.rho0 <= 0.0) throw DomainError("fluid: density must be positive");
  if (m.gamma <= 1.0) throw DomainError("fluid: gamma must exceed 1");
  if (m.mu <= 0.0) throw DomainError("fluid: viscosity must be positive");
  if (m.Pr <= 0.0) throw DomainError("fluid: Prandtl number must be positive");
  if (m.P0 <= 0.0) throw DomainError("fluid: static pressure must be positive");
  if (m.T_K <= 0.0) throw DomainError("fluid: temperature must be positive");
  if (m.h_r < 0.0 || m.h_r > 100.0)
    throw DomainError("fluid: relative humidity must lie in [0, 100] %");
}

void validate(const PorousMedium& m) {
  validate(m.fluid);
  if (m.alpha_inf < 1.0) throw DomainError("porous: tortuosity must be >= 1");
  if (m.Lambda <= 0.0)
    throw DomainError("porous: viscous characteristic length must be positive");
  if (m.Lambda_p < m.Lambda)
    throw DomainError("porous: thermal length must be >= viscous length");
  if (m.sigma <= 0.0)
    throw DomainError("porous: flow resistivity must be positive");
  if (m.phi <= 0.0 || m.phi > 1.0)
    throw DomainError("porous: porosity must lie in (0, 1]");
  if (m.rho1 <= 0.0)
    throw DomainError("porous: frame bulk density must be positive");
}

void validate(const SolidMedium& m) {
  if (m.E <= 0.0) throw DomainError("solid: Young's modulus must be positive");
  if (m.nu <= -1.0 || m.nu >= 0.5)
    throw DomainError("solid: Poisson ratio must lie in (-1, 0.5)");
  if (m.rho <= 0.0) throw DomainError("solid: density must be positive");
  if (m.eta_s < 0.0) throw DomainError("solid: loss factor must be >= 0");
}

double loss_factor_reverberation(double f, double T) {
  if (f <= 0.0) throw DomainError("loss factor: frequency must be positive");
  if (T <= 0.0) throw DomainError("loss factor: reverberation time must be positive");
  return 2.2 / (f * T);
}

double atmospheric_attenuation(double f, double T_K, double h_r, double P0) {
  if (f <= 0.0) throw DomainError("attenuation: frequency must be positive");
  if (T_K <= 0.0) throw DomainError("attenuation: temperature must be positive");
  if (h_r <= 0.0 || h_r > 100.0)
    throw DomainError("attenuation: humidity must lie in (0, 100] %");
  if (P0 <= 0.0) throw DomainError("attenuation: pressure must be positive");

  const double T0 = 293.15;   // reference air temperature, K
  const double T01 = 273.16;  // triple point isotherm temperature, K
  const double p_r = 101325.0;
  const double pa = P0 / p_r;
  const double V = -6.8346 * std::pow(T01 / T_K, 1.261) + 4.6151;
  const double h = h_r * std::pow(10.0, V) / pa;  // molar concentration of water vapour, %
  const double TT = T_K / T0;

  const double frO = pa * (24.0 + 4.04e4 * h * (0.02 + h) / (0.391 + h));
  const double frN =
      pa / std::sqrt(TT) *
      (9.0 + 280.0 * h * std::exp(-4.170 * (std::cbrt(1.0 / TT) - 1.0)));

  const double f2 = f * f;
  const double alpha_dB =
      8.686 * f2 *
      (1.84e-11 / pa * std::sqrt(TT) +
       std::pow(TT, -2.5) *
           (0.01275 * std::exp(-2239.1 / T_K) / (frO + f2 / frO) +
            0.1068 * std::exp(-3352.0 / T_K) / (frN + f2 / frN)));
  return alpha_dB * std::log(10.0) / 10.0;
}

double loss_factor_attenuation(double f, double m, double c) {
  if (f <= 0.0) throw DomainError("loss factor: frequency must be positive");
  if (m < 0.0) throw DomainError("loss factor: attenuation must be >= 0");
  if (c <= 0.0) throw DomainError("loss factor: speed of sound must be positive");
  // T = (6 ln 10) / (m c) turns the attenuation into a reverberation time.
  return 2.2 * c * m / (6.0 * std::log(10.0) * f);
}

double loss_factor(const DampingModel& d, const FluidMedium& m, double f) {
  switch (d.kind) {
    case DampingKind::none:
      return 0.0;
    case DampingKind::reverberation:
      return loss_factor_reverberation(f, d.T);
    case DampingKind::atmospheric:
      return loss_factor_attenuation(
          f, atmospheric_attenuation(f, m.T_K, m.h_r, m.P0), m.c);
  }
  throw DomainError("loss factor: unknown damping kind");
}

cdouble complex_speed(double c, double eta) { return c * cdouble{1.0, eta}; }

cdouble dynamic_bulk_modulus(const PorousMedium& p, double omega) {
  if (omega <= 0.0) throw DomainError("bulk modulus: omega must be positive");
  const FluidMedium& a = p.fluid;
  const double L2 = p.Lambda_p * p.Lambda_p;
  const cdouble inner =
      std::sqrt(1.0 + I * L2 * a.Pr * a.rho0 * omega / (16.0 * a.mu));
  const cdouble denom = 1.0 + 8.0 * a.mu / (I * L2 * a.Pr * a.rho0 * omega) * inner;
  return a.gamma * a.P0 / (a.gamma - (a.gamma - 1.0) / denom);
}

cdouble dynamic_density(const PorousMedium& p, double omega) {
  if (omega <= 0.0) throw DomainError("dynamic density: omega must be positive");
  const FluidMedium& a = p.fluid;
  const double a2 = p.alpha_inf * p.alpha_inf;
  const double s2 = p.sigma * p.sigma;
  const double phi2 = p.phi * p.phi;
  const double L2 = p.Lambda * p.Lambda;
  const cdouble inner =
      std::sqrt(1.0 + I * 4.0 * a2 * a.mu * a.rho0 * omega / (s2 * phi2 * L2));
  return p.alpha_inf * a.rho0 *
         (1.0 + p.sigma * p.phi / (I * p.alpha_inf * a.rho0 * omega) * inner);
}

cdouble limp_density(cdouble rho_e, const PorousMedium& p) {
  const double rho0 = p.fluid.rho0;
  const cdouble M = p.rho1 + p.phi * rho0;
  const cdouble den = M + rho_e - 2.0 * rho0;
  if (std::abs(den) < 1e-12 * (std::abs(M) + std::abs(rho_e) + rho0))
    throw SingularityError("limp density: degenerate denominator");
  return (rho_e * M - rho0 * rho0) / den;
}

cdouble equivalent_speed(cdouble K_e, cdouble rho) {
  if (std::abs(rho) == 0.0)
    throw SingularityError("equivalent speed: zero density");
  cdouble c = std::sqrt(K_e / rho);
  if (c.real() < 0.0) c = -c;
  return c;
}

double wavelength_fluid(const FluidMedium& m, double f) {
  if (f <= 0.0) throw DomainError("wavelength: frequency must be positive");
  validate(m);
  return m.c / f;
}

double wavelength_equivalent(const PorousMedium& p, double f) {
  if (f <= 0.0) throw DomainError("wavelength: frequency must be positive");
  validate(p);
  const double omega = 2.0 * pi * f;
  const cdouble c_e =
      equivalent_speed(dynamic_bulk_modulus(p, omega), dynamic_density(p, omega));
  return c_e.real() / f;
}

double wavelength_bending(const SolidMedium& s, double h, double f) {
  if (f <= 0.0) throw DomainError("wavelength: frequency must be positive");
  if (h <= 0.0) throw DomainError("wavelength: thickness must be positive");
  validate(s);
  const double omega = 2.0 * pi * f;
  const double m_pp = s.rho * h;
  const double B = s.E * h * h * h / (12.0 * (1.0 - s.nu * s.nu));
  const double k_B = std::pow(omega * omega * m_pp / B, 0.25);
  return 2.0 * pi / k_B;
}

}  // namespace stlfem
