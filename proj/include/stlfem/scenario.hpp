#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "stlfem/bands.hpp"
#include "stlfem/reference.hpp"
#include "stlfem/system.hpp"

namespace stlfem {

// JSON round trip; parse errors and semantic problems raise ConfigError with
// an aggregated message.
ScenarioConfig config_from_json(const std::string& text);
std::string config_to_json(const ScenarioConfig& cfg);
ScenarioConfig load_config(const std::string& path);
void save_config(const ScenarioConfig& cfg, const std::string& path);

// Compiled-in scenario library.
std::vector<std::string> preset_names();
ScenarioConfig preset(const std::string& name);

// FNV-1a over the canonical JSON text.
uint64_t config_hash(const ScenarioConfig& cfg);

// Clip the sweep plan to [f_min, f_max]; intervals that fall outside are
// dropped entirely.
void clip_intervals(ScenarioConfig& cfg, double f_min, double f_max);

struct RunOptions {
  std::string out_dir = "out";
  int workers = 1;
  bool snapshot_fields = false;
  bool progress = true;
  bool write_outputs = true;
  bool bands = true;  // false: narrowband artifacts only
};

struct IntervalStats {
  SweepInterval interval;
  int n_dof = 0;
  int solves = 0;
  int failures = 0;
  double seconds = 0.0;
};

struct StlResult {
  BandSpectrum stl;          // one level difference per band
  BandSpectrum level_SR;     // energy-averaged band levels, source room
  BandSpectrum level_RR;     // energy-averaged band levels, receiving room
  std::vector<double> freqs; // merged narrowband grid
  std::vector<std::vector<cdouble>> mic_SR;  // [line][mic]
  std::vector<std::vector<cdouble>> mic_RR;
  std::vector<IntervalStats> stats;
  double max_drift = 0.0;
  int empty_bands = 0;
  uint64_t hash = 0;
  bool ok = true;
};

// Full pipeline: per-interval meshing, sweeps, band synthesis, file outputs
// (stl.csv, narrowband.csv, manifest.txt) under opt.out_dir.
StlResult run_stl(const ScenarioConfig& cfg, const RunOptions& opt);

struct ConvergenceRun {
  int rate = 0;
  int n_dof = 0;
  std::vector<double> freqs;
  std::vector<cdouble> mean_SR;  // mean complex microphone pressure
  std::vector<cdouble> mean_RR;
};

struct ConvergencePair {
  int rate_coarse = 0;
  int rate_fine = 0;
  std::vector<FracBand> frac_SR;
  std::vector<FracBand> frac_RR;
  ErrorSummary err_RR;  // fine rate as reference
};

struct ConvergenceReport {
  std::vector<ConvergenceRun> runs;
  std::vector<ConvergencePair> pairs;
  bool ok = true;
};

// Mesh refinement comparison over the configured sweep range; always meshed
// domain-specifically. Writes frac.csv and manifest.txt under opt.out_dir.
ConvergenceReport run_convergence(const ScenarioConfig& cfg,
                                  const std::vector<int>& rates,
                                  const RunOptions& opt);

int run_cli(int argc, char** argv);

}  // namespace stlfem
