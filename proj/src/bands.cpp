#include "stlfem/bands.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>

namespace stlfem {

namespace {
// Preferred numbers of the R10 series, one decade starting at 1.
constexpr double kR10[10] = {1.0, 1.25, 1.6, 2.0, 2.5, 3.15, 4.0, 5.0, 6.3, 8.0};
}

double band_nominal(int n) {
  int decade = n >= 0 ? n / 10 : -((-n + 9) / 10);
  int r = n - 10 * decade;
  return kR10[r] * 1000.0 * std::pow(10.0, decade);
}

std::vector<ThirdOctaveBand> third_octave_bands(double f_min, double f_max) {
  if (f_min <= 0.0 || f_max <= 0.0)
    throw DomainError("bands: frequency limits must be positive");
  if (f_min > f_max) throw DomainError("bands: f_min must not exceed f_max");
  std::vector<ThirdOctaveBand> out;
  int n_lo = static_cast<int>(std::floor(10.0 * std::log10(f_min / 1000.0))) - 2;
  int n_hi = static_cast<int>(std::ceil(10.0 * std::log10(f_max / 1000.0))) + 2;
  for (int n = n_lo; n <= n_hi; ++n) {
    double nominal = band_nominal(n);
    if (nominal < f_min || nominal > f_max) continue;
    ThirdOctaveBand b;
    b.n = n;
    b.nominal = nominal;
    b.f_m = 1000.0 * std::pow(10.0, n / 10.0);
    b.f_l = b.f_m * std::pow(10.0, -0.05);
    b.f_u = b.f_m * std::pow(10.0, 0.05);
    out.push_back(b);
  }
  return out;
}

BandRms band_rms(const std::vector<double>& freqs,
                 const std::vector<cdouble>& amplitudes,
                 const ThirdOctaveBand& band) {
  if (freqs.size() != amplitudes.size())
    throw DomainError("band rms: frequency and amplitude counts differ");
  BandRms r;
  double sum = 0.0;
  for (size_t j = 0; j < freqs.size(); ++j) {
    if (freqs[j] >= band.f_l && freqs[j] < band.f_u) {
      sum += std::norm(amplitudes[j]);
      ++r.lines;
    }
  }
  // RMS of a sum of tones with amplitude spectra p_hat: p^2 = sum |p_hat|^2 / 2.
  r.p = std::sqrt(0.5 * sum);
  return r;
}

double energy_average_level(const std::vector<double>& p_rms) {
  if (p_rms.empty()) throw DomainError("level: no microphone pressures");
  double sum = 0.0;
  for (double p : p_rms) {
    if (p < 0.0) throw DomainError("level: negative RMS pressure");
    sum += p * p;
  }
  if (sum == 0.0) return -std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(sum / (static_cast<double>(p_rms.size()) * p_ref * p_ref));
}

double sound_reduction_index(double L1, double L2) { return L1 - L2; }

double sound_reduction_index(double L1, double L2, double S, double A) {
  if (S <= 0.0 || A <= 0.0)
    throw DomainError("reduction index: S and A must be positive");
  return L1 - L2 + 10.0 * std::log10(S / A);
}

bool reverberation_time_admissible(double T, double V) {
  if (V <= 0.0) throw DomainError("reverberation: volume must be positive");
  return T >= 1.0 && T <= 2.0 * std::pow(V / 50.0, 2.0 / 3.0);
}

int required_source_count(double V) {
  if (V <= 0.0) throw DomainError("sources: volume must be positive");
  return static_cast<int>(std::ceil(152.0 / std::pow(V, 2.0 / 3.0)));
}

void write_band_csv(const BandSpectrum& s, std::ostream& os) {
  os << "f_nominal,f_l,f_m,f_u,value_dB\n";
  char line[160];
  for (size_t i = 0; i < s.bands.size(); ++i) {
    const ThirdOctaveBand& b = s.bands[i];
    std::snprintf(line, sizeof line, "%.10g,%.10g,%.10g,%.10g,%.6f\n",
                  b.nominal, b.f_l, b.f_m, b.f_u, s.values[i]);
    os << line;
  }
}

}  // namespace stlfem
