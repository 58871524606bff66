#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

#include "vss/model.hpp"

namespace vss {

enum class Window { rectangular, hann };

/// `oscillation` labels bin k with E_k = 2πħk/T, the energy of the delay
/// oscillation itself; `mismatch` labels it 2E_k, the level-mismatch scale 2ε_k − ε_f.
enum class EnergyAxis { oscillation, mismatch };

struct SpectrogramOptions {
  Window window = Window::hann;
  bool dc_removal = true;
  EnergyAxis axis = EnergyAxis::oscillation;
};

struct Spectrogram {
  std::vector<double> bin_energies;  // eV, k = 0..M/2
  std::vector<double> magnitude;     // |X_k|
  Window window = Window::hann;
  bool dc_removed = true;
  EnergyAxis axis = EnergyAxis::oscillation;
  std::size_t samples = 0;           // M

  double bin_width() const noexcept;
};

/// One-sided DFT magnitude of a uniformly sampled delay trace.
/// Throws ErrorKind::input on non-uniform delays, M < 16, or a length mismatch.
Spectrogram spectrogram(std::span<const double> trace, std::span<const double> delays,
                        const SpectrogramOptions& options = {});

/// Complex one-sided DFT X_k, k = 0..M/2, of the mean-removed, windowed trace.
std::vector<std::complex<double>> complex_spectrum(std::span<const double> trace,
                                                   std::span<const double> delays,
                                                   const SpectrogramOptions& options = {});

/// Σ|x_m·w_m|² after mean removal; with `spectral_energy` this checks Parseval.
double windowed_energy(std::span<const double> trace, const SpectrogramOptions& options = {});
/// (1/M)·Σ_k |X_k|² over the full two-sided spectrum reconstructed from the one-sided half.
double spectral_energy(const Spectrogram& spec);

struct Peak {
  double energy = 0.0;
  double magnitude = 0.0;
};

/// Strict local maxima above rel_threshold × (band max) in E ≥ min_energy, refined by
/// three-point parabolic interpolation, sorted by descending magnitude.
std::vector<Peak> detect_peaks(const Spectrogram& spec, double min_energy = 0.01,
                               double rel_threshold = 0.2);

inline constexpr double kSignalToBackgroundCap = 1e12;

/// Mean peak magnitude over the median of the band bins more than two bins from any
/// peak. Capped at 1e12 (zero background, or no bins left).
double signal_to_background(const Spectrogram& spec, std::span<const double> peak_energies,
                            double min_energy = 0.01);

/// Where the per-member max normalization is applied before averaging.
enum class EnsembleNormalization { delay_domain, fourier_domain };

struct EnsembleOptions {
  double photon_number = 1.0;
  DelaySampling sampling;
  SpectrogramOptions spectrogram;
  EnsembleNormalization normalization = EnsembleNormalization::delay_domain;
  unsigned threads = 1;
};

struct EnsembleMember {
  double length = 0.0;
  double gain = 0.0;
  double k_uv = 0.0;
  double trace_max = 0.0;
  Eigen::Index rank = 0;
};

struct EnsembleResult {
  std::vector<double> lengths;
  std::vector<double> delays;
  std::vector<double> averaged_trace;
  Spectrogram averaged_spectrogram;
  Spectrogram raw_spectrogram;  // same trace, no DC removal
  std::vector<EnsembleMember> members;
};

/// `count` lengths uniformly spaced over [min, max] inclusive.
std::vector<double> uniform_lengths(double min, double max, std::size_t count);

/// Runs one pipeline per crystal length (in parallel), normalizes each total trace
/// by its own maximum over τ, averages pointwise, then transforms once. With
/// fourier_domain normalization each member's complex spectrum is divided by its
/// peak magnitude and the complex spectra are averaged instead.
EnsembleResult ensemble_average(const ModelConfig& base, std::span<const double> lengths,
                                const EnsembleOptions& options);

}  // namespace vss
