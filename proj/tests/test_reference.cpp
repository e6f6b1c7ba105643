#include <cmath>
#include <complex>
#include <vector>

#include "doctest.h"
#include "stlfem/reference.hpp"

using namespace stlfem;

namespace {

constexpr double kPi = 3.14159265358979323846;

SolidMedium plasterboard() {
  SolidMedium s;
  s.E = 3e9;
  s.nu = 0.15;
  s.rho = 800.0;
  s.eta_s = 0.03;
  return s;
}

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

std::vector<cdouble> sample_response(int n, unsigned seed) {
  std::vector<cdouble> h(n);
  for (int i = 0; i < n; ++i) {
    double t = 0.1 * i + seed;
    h[static_cast<size_t>(i)] = cdouble(std::cos(t), std::sin(1.7 * t));
  }
  return h;
}

}  // namespace

TEST_SUITE("reference") {
  TEST_CASE("normal-incidence mass law") {
    FluidMedium air;
    CHECK(berger_reduction_index(100.0, 40.0, air) ==
          doctest::Approx(26.665064).epsilon(1e-6));
    // +6 dB per mass doubling and per frequency doubling.
    double r = berger_reduction_index(200.0, 40.0, air);
    CHECK(r - berger_reduction_index(100.0, 40.0, air) ==
          doctest::Approx(20.0 * std::log10(2.0)).epsilon(1e-12));
    CHECK(berger_reduction_index(100.0, 80.0, air) ==
          doctest::Approx(r).epsilon(1e-12));
    CHECK_THROWS_AS(berger_reduction_index(0.0, 40.0, air), DomainError);
    CHECK_THROWS_AS(berger_reduction_index(100.0, 0.0, air), DomainError);
  }

  TEST_CASE("bending stiffness and coincidence frequency") {
    SolidMedium s = plasterboard();
    double B = bending_stiffness(s, 0.025);
    CHECK(B == doctest::Approx(3e9 * 0.025 * 0.025 * 0.025 /
                               (12.0 * (1.0 - 0.15 * 0.15))).epsilon(1e-14));
    FluidMedium air;
    CHECK(coincidence_frequency(s, 0.025, air) ==
          doctest::Approx(1324.6518).epsilon(1e-6));
    CHECK(coincidence_frequency(s, 0.05, air) ==
          doctest::Approx(662.325902).epsilon(1e-6));
    // f_c scales as 1/h.
    CHECK(coincidence_frequency(s, 0.025, air) ==
          doctest::Approx(2.0 * coincidence_frequency(s, 0.05, air))
              .epsilon(1e-12));
    CHECK_THROWS_AS(bending_stiffness(s, 0.0), DomainError);
  }

  TEST_CASE("gap stiffness of plain and porous fillings") {
    FluidMedium air;
    CHECK(gap_stiffness(air) ==
          doctest::Approx(1.2041 * 343.0 * 343.0).epsilon(1e-12));
    PorousMedium gw = glass_wool();
    double K = gap_stiffness(gw);
    CHECK(K == doctest::Approx(105940.0).epsilon(1e-4));
    CHECK(K == doctest::Approx(std::real(
                  dynamic_bulk_modulus(gw, 2.0 * kPi * 1000.0))).epsilon(1e-12));
    CHECK_THROWS_AS(gap_stiffness(gw, 0.0), DomainError);
  }

  TEST_CASE("mass-spring-mass resonance") {
    FluidMedium air;
    // Two 20 kg/m^2 leaves around a 5 cm air space.
    double f0 = double_wall_resonance(20.0, 20.0, gap_stiffness(air), 0.05);
    CHECK(f0 == doctest::Approx(84.715041).epsilon(1e-6));
    // Thin filled cavity between 16 kg/m^2 leaves.
    double f0p =
        double_wall_resonance(16.0, 16.0, gap_stiffness(glass_wool()), 0.01);
    CHECK(f0p == doctest::Approx(183.15).epsilon(1e-3));
    // Symmetric formula: K and masses enter as sqrt.
    CHECK(double_wall_resonance(20.0, 20.0, 4.0 * gap_stiffness(air), 0.05) ==
          doctest::Approx(2.0 * f0).epsilon(1e-12));
    CHECK_THROWS_AS(double_wall_resonance(0.0, 20.0, 1e5, 0.05), DomainError);
    CHECK_THROWS_AS(double_wall_resonance(20.0, 20.0, 0.0, 0.05), DomainError);
  }

  TEST_CASE("octave slope guide") {
    CHECK(octave_slope_guide(100.0, 100.0, 31.0) == doctest::Approx(31.0));
    CHECK(octave_slope_guide(200.0, 100.0, 31.0) ==
          doctest::Approx(43.0).epsilon(1e-12));
    CHECK(octave_slope_guide(50.0, 100.0, 31.0) ==
          doctest::Approx(19.0).epsilon(1e-12));
    CHECK(octave_slope_guide(200.0, 100.0, 31.0, 18.0) ==
          doctest::Approx(49.0).epsilon(1e-12));
    CHECK_THROWS_AS(octave_slope_guide(0.0, 100.0, 31.0), DomainError);
  }

  TEST_CASE("clamped plate spectrum matches the thin-plate constants") {
    SolidMedium s = plasterboard();
    double h = 0.02, a = 1.0, b = 1.0;
    std::vector<double> f = clamped_plate_frequencies(s, h, a, b, 4);
    REQUIRE(f.size() == 4);
    double D = bending_stiffness(s, h);
    double scale = std::sqrt(D / (s.rho * h)) / (2.0 * kPi * a * a);
    // omega a^2 sqrt(m''/D): 35.99, then the degenerate pair at 73.41.
    CHECK(f[0] / scale == doctest::Approx(35.992).epsilon(0.01));
    CHECK(f[1] / scale == doctest::Approx(73.413).epsilon(0.01));
    CHECK(f[2] / scale == doctest::Approx(73.413).epsilon(0.01));
    CHECK(f[1] == doctest::Approx(f[2]).epsilon(5e-3));
    for (size_t i = 1; i < f.size(); ++i) CHECK(f[i] >= f[i - 1]);

    // Ritz estimates converge from above with basis growth.
    std::vector<double> coarse = clamped_plate_frequencies(s, h, a, b, 4, 6);
    std::vector<double> fine = clamped_plate_frequencies(s, h, a, b, 4, 12);
    for (size_t i = 0; i < 4; ++i) CHECK(coarse[i] >= fine[i] - 1e-9);

    // Kirchhoff scaling: doubling h doubles every eigenfrequency.
    std::vector<double> thick = clamped_plate_frequencies(s, 2.0 * h, a, b, 4);
    for (size_t i = 0; i < 4; ++i)
      CHECK(thick[i] == doctest::Approx(2.0 * f[i]).epsilon(1e-9));

    CHECK_THROWS_AS(clamped_plate_frequencies(s, 0.0, a, b, 4), DomainError);
    CHECK_THROWS_AS(clamped_plate_frequencies(s, h, a, b, 0), DomainError);
    CHECK_THROWS_AS(clamped_plate_frequencies(s, h, a, b, 200, 10), DomainError);
  }

  TEST_CASE("frac is a normalised projection") {
    std::vector<cdouble> h1 = sample_response(32, 1);
    CHECK(frac(h1, h1) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<cdouble> scaled = h1;
    for (auto& v : scaled) v *= cdouble(0.0, 3.7);
    CHECK(frac(h1, scaled) == doctest::Approx(1.0).epsilon(1e-12));
    std::vector<cdouble> e1{cdouble(1.0, 0.0), cdouble(0.0, 0.0)};
    std::vector<cdouble> e2{cdouble(0.0, 0.0), cdouble(1.0, 0.0)};
    CHECK(frac(e1, e2) == doctest::Approx(0.0));
    std::vector<cdouble> h2 = sample_response(32, 9);
    double v = frac(h1, h2);
    CHECK(v >= 0.0);
    CHECK(v <= 1.0 + 1e-12);
    CHECK(frac(h2, h1) == doctest::Approx(v).epsilon(1e-12));

    std::vector<cdouble> shorter(h1.begin(), h1.begin() + 5);
    CHECK_THROWS_AS(frac(h1, shorter), AlignmentError);
    CHECK_THROWS_AS(frac({}, {}), DomainError);
    std::vector<cdouble> zero(32, cdouble(0.0, 0.0));
    CHECK_THROWS_AS(frac(h1, zero), SingularityError);
  }

  TEST_CASE("frac report tiles the range with half-open intervals") {
    std::vector<double> fa, fb;
    std::vector<cdouble> ha, hb;
    for (int f = 90; f <= 310; ++f) {
      fa.push_back(f);
      ha.push_back(cdouble(std::sin(0.05 * f), std::cos(0.03 * f)));
    }
    for (int f = 100; f <= 300; ++f) {
      fb.push_back(f);
      hb.push_back(cdouble(std::sin(0.05 * f), std::cos(0.03 * f)));
    }
    std::vector<FracBand> bands =
        frac_report(fa, ha, fb, hb, 100.0, 300.0, 25.0);
    REQUIRE(bands.size() == 8);
    int lines = 0;
    for (size_t k = 0; k < bands.size(); ++k) {
      CHECK(bands[k].f_lo == doctest::Approx(100.0 + 25.0 * k));
      CHECK(bands[k].lines == (k + 1 == bands.size() ? 26 : 25));
      CHECK(bands[k].value == doctest::Approx(1.0).epsilon(1e-12));
      lines += bands[k].lines;
    }
    CHECK(lines == 201);

    // Grids disagreeing inside the window are rejected.
    std::vector<double> shifted = fb;
    for (auto& f : shifted) f += 0.5;
    CHECK_THROWS_AS(frac_report(fa, ha, shifted, hb, 100.0, 300.0, 25.0),
                    AlignmentError);
    CHECK_THROWS_AS(frac_report(fa, ha, fb, hb, 300.0, 100.0, 25.0),
                    DomainError);
    CHECK_THROWS_AS(frac_report(fa, ha, fb, hb, 1000.0, 1200.0, 25.0),
                    DomainError);
  }

  TEST_CASE("relative errors skip zero references") {
    CHECK(relative_error(2.0, 1.5) == doctest::Approx(0.25).epsilon(1e-15));
    CHECK(std::isnan(relative_error(0.0, 1.0)));
    ErrorSummary s = averaged_relative_error({2.0, 4.0, 0.0}, {1.5, 5.0, 1.0});
    CHECK(s.used == 2);
    CHECK(s.skipped == 1);
    CHECK(s.mean == doctest::Approx(0.0).epsilon(1e-15));
    CHECK_THROWS_AS(averaged_relative_error({1.0}, {1.0, 2.0}), AlignmentError);
    CHECK_THROWS_AS(averaged_relative_error({}, {}), DomainError);
  }
}
