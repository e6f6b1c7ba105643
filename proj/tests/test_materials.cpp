#include <cmath>
#include <complex>

#include "doctest.h"
#include "stlfem/materials.hpp"

using namespace stlfem;

namespace {

PorousMedium glass_wool() {
  PorousMedium p;
  p.alpha_inf = 1.06;
  p.Lambda = 56e-6;
  p.Lambda_p = 110e-6;
  p.sigma = 40000.0;
  p.phi = 0.94;
  p.rho1 = 130.0;
  return p;
}

double rel(cdouble a, cdouble b) { return std::abs(a - b) / std::abs(b); }

}  // namespace

TEST_SUITE("materials") {
  TEST_CASE("default air state") {
    FluidMedium air;
    CHECK(air.c == 343.0);
    CHECK(air.rho0 == 1.2041);
    CHECK(air.gamma == 1.4);
    CHECK(air.mu == 18.1e-6);
    CHECK(air.Pr == 0.7039);
    CHECK(air.P0 == 101325.0);
    CHECK(air.T_K == 293.15);
    CHECK(air.h_r == 40.0);
    CHECK_NOTHROW(validate(air));
  }

  TEST_CASE("validation rejects broken media") {
    FluidMedium air;
    air.c = -1.0;
    CHECK_THROWS_AS(validate(air), DomainError);

    PorousMedium p = glass_wool();
    p.Lambda_p = 40e-6;  // below the viscous length
    CHECK_THROWS_AS(validate(p), DomainError);
    p = glass_wool();
    p.phi = 1.2;
    CHECK_THROWS_AS(validate(p), DomainError);

    SolidMedium s;
    CHECK_THROWS_AS(validate(s), DomainError);
  }

  TEST_CASE("reverberation loss factor satisfies eta f T = 2.2") {
    for (double f : {50.0, 100.0, 997.0, 3150.0})
      for (double T : {0.5, 1.5, 2.0})
        CHECK(loss_factor_reverberation(f, T) * f * T == doctest::Approx(2.2).epsilon(1e-14));
    CHECK_THROWS_AS(loss_factor_reverberation(0.0, 1.5), DomainError);
    CHECK_THROWS_AS(loss_factor_reverberation(100.0, 0.0), DomainError);
  }

  TEST_CASE("atmospheric attenuation reference values") {
    // Frozen from a high-precision evaluation of the pure-tone formula at
    // 20 C, 40 % RH, 101.325 kPa.
    double m = atmospheric_attenuation(1000.0, 293.15, 40.0, 101325.0);
    CHECK(m == doctest::Approx(0.0010715464574).epsilon(1e-9));
    // 70 % RH sanity point, converted back to dB/km.
    double m70 = atmospheric_attenuation(1000.0, 293.15, 70.0, 101325.0);
    CHECK(m70 * 10.0 / std::log(10.0) * 1000.0 == doctest::Approx(4.978).epsilon(2e-3));
    CHECK_THROWS_AS(atmospheric_attenuation(1000.0, 293.15, 0.0, 101325.0),
                    DomainError);
  }

  TEST_CASE("attenuation loss factor decade ordering") {
    FluidMedium air;
    auto eta_m = [&](double f) {
      double m = atmospheric_attenuation(f, air.T_K, air.h_r, air.P0);
      return loss_factor_attenuation(f, m, air.c);
    };
    double e100 = eta_m(100.0);
    double e1000 = eta_m(1000.0);
    double e3150 = eta_m(3150.0);
    CHECK(e100 == doctest::Approx(4.4126e-5).epsilon(1e-4));
    CHECK(e1000 == doctest::Approx(5.8528e-5).epsilon(1e-4));
    CHECK(e3150 == doctest::Approx(9.4859e-5).epsilon(1e-4));
    CHECK(e100 < e1000);
    CHECK(e1000 < e3150);
  }

  TEST_CASE("damping dispatch") {
    FluidMedium air;
    DampingModel none;
    CHECK(loss_factor(none, air, 100.0) == 0.0);
    DampingModel rev;
    rev.kind = DampingKind::reverberation;
    rev.T = 1.5;
    CHECK(loss_factor(rev, air, 100.0) ==
          doctest::Approx(loss_factor_reverberation(100.0, 1.5)));
    DampingModel atm;
    atm.kind = DampingKind::atmospheric;
    double m = atmospheric_attenuation(100.0, air.T_K, air.h_r, air.P0);
    CHECK(loss_factor(atm, air, 100.0) ==
          doctest::Approx(loss_factor_attenuation(100.0, m, air.c)));
  }

  TEST_CASE("complex speed convention") {
    cdouble c = complex_speed(343.0, 0.01);
    CHECK(c.real() == 343.0);
    CHECK(c.imag() == doctest::Approx(3.43));
  }

  TEST_CASE("equivalent fluid at 300 Hz") {
    // Frozen from an independent 40-digit evaluation of the five-parameter
    // equivalent-fluid model for the glass wool data set.
    PorousMedium p = glass_wool();
    const double omega = 2.0 * pi * 300.0;
    cdouble K = dynamic_bulk_modulus(p, omega);
    CHECK(rel(K, {101813.83589310787, 3799.8808761533846}) < 1e-12);
    cdouble rho_e = dynamic_density(p, omega);
    CHECK(rel(rho_e, {1.6916105613434005, -19.951741546257604}) < 1e-12);
    cdouble rho_l = limp_density(rho_e, p);
    CHECK(rel(rho_l, {4.6500679458165492, -19.349973441760143}) < 1e-12);
    cdouble c_rigid = equivalent_speed(K, rho_e);
    CHECK(rel(c_rigid, {51.617721768918225, 49.233247279638134}) < 1e-12);
    cdouble c_limp = equivalent_speed(K, rho_l);
    CHECK(rel(c_limp, {55.359645819190125, 45.331238022647038}) < 1e-12);
  }

  TEST_CASE("equivalent speed branch and identity") {
    PorousMedium p = glass_wool();
    for (double f : {20.0, 300.0, 2000.0}) {
      const double omega = 2.0 * pi * f;
      cdouble K = dynamic_bulk_modulus(p, omega);
      cdouble rho = limp_density(dynamic_density(p, omega), p);
      cdouble c = equivalent_speed(K, rho);
      CHECK(c.real() > 0.0);
      CHECK(rel(c * c, K / rho) < 1e-12);
    }
  }

  TEST_CASE("bulk modulus low-frequency isothermal limit") {
    PorousMedium p = glass_wool();
    cdouble K = dynamic_bulk_modulus(p, 2.0 * pi * 1e-6);
    CHECK(std::abs(K - cdouble{p.fluid.P0, 0.0}) / p.fluid.P0 < 1e-6);
  }

  TEST_CASE("high-frequency adiabatic and inertial trends") {
    // The asymptotes are approached like omega^{-1/2}: still a few 1e-5 away
    // at 1e12 Hz, essentially exact by 1e20 Hz.
    PorousMedium p = glass_wool();
    const double gP0 = p.fluid.gamma * p.fluid.P0;
    double errK12 = std::abs(dynamic_bulk_modulus(p, 2.0 * pi * 1e12) - gP0) / gP0;
    double errK20 = std::abs(dynamic_bulk_modulus(p, 2.0 * pi * 1e20) - gP0) / gP0;
    CHECK(errK12 < 1e-4);
    CHECK(errK20 < 1e-8);
    CHECK(errK20 < errK12);
    const double ar = p.alpha_inf * p.fluid.rho0;
    double errR12 = std::abs(dynamic_density(p, 2.0 * pi * 1e12) - ar) / ar;
    double errR20 = std::abs(dynamic_density(p, 2.0 * pi * 1e20) - ar) / ar;
    CHECK(errR12 < 1e-4);
    CHECK(errR20 < 1e-8);
    CHECK(errR20 < errR12);
  }

  TEST_CASE("limp density approaches rigid for a heavy frame") {
    PorousMedium heavy = glass_wool();
    heavy.rho1 *= 1000.0;
    for (double f : {100.0, 300.0, 1000.0}) {
      cdouble rho_e = dynamic_density(heavy, 2.0 * pi * f);
      cdouble rho_l = limp_density(rho_e, heavy);
      CHECK(rel(rho_l, rho_e) < 1e-3);
    }
  }

  TEST_CASE("limp density singularity guard") {
    PorousMedium p = glass_wool();
    // Denominator M + rho_e - 2 rho0 driven to zero exactly.
    double M = p.rho1 + p.phi * p.fluid.rho0;
    cdouble rho_e{2.0 * p.fluid.rho0 - M, 0.0};
    CHECK_THROWS_AS(limp_density(rho_e, p), SingularityError);
  }

  TEST_CASE("wavelengths") {
    FluidMedium air;
    CHECK(wavelength_fluid(air, 343.0) == doctest::Approx(1.0));
    CHECK(wavelength_fluid(air, 300.0) == doctest::Approx(343.0 / 300.0));

    PorousMedium p = glass_wool();
    CHECK(wavelength_equivalent(p, 300.0) ==
          doctest::Approx(0.17205907).epsilon(1e-7));

    SolidMedium s;
    s.E = 3e9;
    s.nu = 0.15;
    s.rho = 800.0;
    s.eta_s = 0.03;
    CHECK(wavelength_bending(s, 0.025, 300.0) ==
          doctest::Approx(0.544218).epsilon(1e-5));
    // Dispersion: lambda_B ~ f^{-1/2}.
    double r = wavelength_bending(s, 0.025, 100.0) /
               wavelength_bending(s, 0.025, 400.0);
    CHECK(r == doctest::Approx(2.0).epsilon(1e-12));
  }
}
