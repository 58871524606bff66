#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vss/model.hpp"
#include "vss/spectro.hpp"

namespace vss {

/// Everything a CLI run reads from its config file. Missing keys keep these defaults.
struct RunConfig {
  struct Pump {
    double center_energy_ev = 3.1;
    double duration_fs = 1000.0;
  } pump;
  struct Crystal {
    double length_m = 1e-3;
    double gs_ps_per_mm = 5.2;
    double gi_ps_per_mm = 5.6;
  } crystal;
  struct Grid {
    double center_ev = 1.55;
    double half_width_ev = 0.127875;
    std::size_t points = 1024;
  } grid;
  struct Medium {
    double final_energy_ev = 3.1;
    std::vector<IntermediateLevel> levels;  // empty → default or random set
    double linewidth_ev = 0.0;
    std::size_t random_level_count = 0;     // > 0 draws levels from --seed
  } medium;
  struct Schmidt {
    double truncation = kDefaultTruncation;
  } schmidt;
  struct Beam {
    double target_photon_number = 1.0;
  } beam;
  struct Scan {
    double delay_max_fs = 8000.0;
    std::size_t delay_points = 1024;
  } scan;
  struct Ensemble {
    double length_min_m = 0.020;
    double length_max_m = 0.022;
    std::size_t count = 100;
  } ensemble;
  struct Analysis {
    Window window = Window::hann;
    bool dc_removal = true;
    double peak_min_energy_ev = 0.01;
    double peak_rel_threshold = 0.2;
    EnergyAxis energy_axis = EnergyAxis::mismatch;
    EnsembleNormalization normalization = EnsembleNormalization::delay_domain;
  } analysis;
  struct Sweep {
    std::vector<double> photon_numbers;  // default: 1e-2 … 1e6, two per decade
    double fit_min = 1e-2;
    double fit_max = 1.0;
  } sweep;
  struct Joint {
    std::vector<double> compare_durations_fs{20.0, 110.0, 1000.0};
    std::size_t max_plot_points = 256;
  } joint;

  /// Throws ErrorKind::config naming the first violated invariant.
  void validate() const;
};

std::vector<double> default_sweep_photon_numbers();

/// Parses one JSON document. Empty or whitespace-only text yields the defaults;
/// unknown keys and type mismatches are rejected with the dotted key path;
/// syntax errors report line and column.
RunConfig parse_config(const std::string& text);
RunConfig load_config(const std::filesystem::path& path);

/// Every field, defaults included, as the JSON the loader accepts.
std::string config_to_json(const RunConfig& config, int indent = 2);

/// Resolves levels (explicit, random from `seed`, or the default set) and moves the
/// grid off zero-linewidth poles if a node would land on one.
ModelConfig model_config(const RunConfig& config, std::uint64_t seed,
                         std::vector<std::string>* notes = nullptr);

DelaySampling delay_sampling(const RunConfig& config);
SpectrogramOptions spectrogram_options(const RunConfig& config);

}  // namespace vss
