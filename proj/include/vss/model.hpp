#pragma once

#include <optional>
#include <span>
#include <vector>

#include "vss/medium.hpp"
#include "vss/schmidt.hpp"
#include "vss/spdc.hpp"
#include "vss/tpa.hpp"

namespace vss {

/// Everything one end-to-end twin-beam → TPA run needs. The signal grid is `grid`;
/// the idler grid mirrors it about half the transition energy.
struct ModelConfig {
  PumpParams pump;
  CrystalParams crystal;
  FrequencyGrid grid;
  MediumLevels medium = paper_default_medium();
  double truncation = kDefaultTruncation;

  FrequencyGrid idler_grid() const;
  void validate() const;
};

/// Joint amplitude and its Schmidt decomposition, independent of gain.
struct TwinBeam {
  JointAmplitude amplitude;
  SchmidtDecomposition decomposition;
};

TwinBeam prepare_twin_beam(const ModelConfig& config);

/// Gains and spectral functions at a target mean signal photon number.
struct BeamState {
  double photon_number = 0.0;
  TwinBeamGain gains;
  SpectralFunctions functions;
};

BeamState beam_at(const TwinBeam& beam, double photon_number);

/// prepare → solve gain → F matrices → scan.
DelayTrace run_delay_scan(const ModelConfig& config, double photon_number,
                          const DelaySampling& sampling, unsigned threads = 1);

struct FluxRow {
  double photon_number = 0.0;
  double gain = 0.0;
  double k_uv = 0.0;
  DelayIntegrals integrals;
};

struct FluxTable {
  std::vector<FluxRow> rows;
  double slope_quantum = 0.0;             // NaN when fewer than two rows fall in the fit window
  double slope_noise_classical = 0.0;
  std::optional<double> crossover;        // N_s where quantum = noise + classical
};

struct FitWindow {
  double min_photon_number = 1e-2;
  double max_photon_number = 1.0;
};

/// One decomposition, then gains and delay-integrated groups per photon number.
FluxTable flux_sweep(const ModelConfig& config, std::span<const double> photon_numbers,
                     const DelaySampling& sampling, unsigned threads = 1, FitWindow fit = {});

/// Least-squares slope of log y against log x. NaN with fewer than two points.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace vss
