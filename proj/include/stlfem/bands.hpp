#pragma once

#include <iosfwd>
#include <vector>

#include "stlfem/common.hpp"

namespace stlfem {

// One-third-octave band (base-10 convention, band number n relative to 1 kHz).
struct ThirdOctaveBand {
  int n = 0;
  double nominal = 0.0;  // preferred label frequency, Hz
  double f_m = 0.0;      // exact mid frequency 1000 * 10^{n/10}, Hz
  double f_l = 0.0;      // lower edge f_m * 10^{-1/20}, Hz
  double f_u = 0.0;      // upper edge f_m * 10^{+1/20}, Hz
};

// Preferred label frequency for band number n.
double band_nominal(int n);

// All bands whose nominal mid frequency lies in [f_min, f_max].
std::vector<ThirdOctaveBand> third_octave_bands(double f_min, double f_max);

// RMS band pressure synthesised from narrowband complex amplitudes whose
// frequencies fall in [f_l, f_u); lines==0 flags an empty band.
struct BandRms {
  double p = 0.0;
  int lines = 0;
  bool empty() const { return lines == 0; }
};
BandRms band_rms(const std::vector<double>& freqs,
                 const std::vector<cdouble>& amplitudes,
                 const ThirdOctaveBand& band);

// Energetic average level over d microphone RMS pressures,
// L = 10 lg( sum p_j^2 / (d p_ref^2) ).
double energy_average_level(const std::vector<double>& p_rms);

// Sound reduction index R = L1 - L2 (+ 10 lg(S/A) when the area correction
// is enabled).
double sound_reduction_index(double L1, double L2);
double sound_reduction_index(double L1, double L2, double S, double A);

// Admissible reverberation time window 1 <= T <= 2 (V/50)^{2/3}.
bool reverberation_time_admissible(double T, double V);

// Minimum number of uncorrelated source positions for room volume V.
int required_source_count(double V);

// Band spectrum with levels (or level differences) per band.
struct BandSpectrum {
  std::vector<ThirdOctaveBand> bands;
  std::vector<double> values;
  std::vector<int> lines;  // narrowband lines per band
};

// CSV with header f_nominal,f_l,f_m,f_u,value_dB and one row per band.
void write_band_csv(const BandSpectrum& s, std::ostream& os);

}  // namespace stlfem
