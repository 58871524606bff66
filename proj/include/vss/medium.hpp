#pragma once

#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "vss/grid.hpp"

namespace vss {

struct IntermediateLevel {
  double energy = 0.0;          // eV, ε_k
  double dipole_product = 1.0;  // μ_fk·μ_kg, arbitrary units
};

struct MediumLevels {
  double ground_energy = 0.0;  // eV, ε_g
  double final_energy = 3.1;   // eV, ε_f
  std::vector<IntermediateLevel> levels;
  double linewidth = 0.0;  // eV, γ

  /// Throws ErrorKind::config on ε_f ≤ ε_g, no levels, or γ < 0. Levels outside
  /// (ε_g, ε_f) are reported through `warnings()` rather than rejected.
  void validate() const;
  std::vector<std::string> warnings() const;
};

/// 𝒦(ω) = Σ_k μ_fk μ_kg / (ε_k − ε_g − ω − iγ).
std::complex<double> response(double omega, const MediumLevels& medium);

/// ε_g = 0, ε_f = 3.1 eV, ε_k = (ε_f + {0.05, 0.075, 0.089})/2, unit dipoles, γ = 0.
MediumLevels paper_default_medium();

/// Levels with mismatch 2ε_k − ε_f drawn uniformly from [min_mismatch, max_mismatch)
/// with a portable mt19937_64 stream, sorted ascending.
MediumLevels random_medium(std::uint64_t seed, std::size_t count, double final_energy = 3.1,
                           double min_mismatch = 0.01, double max_mismatch = 0.1);

/// Smallest distance, in units of the grid step, between any resonance ε_k − ε_g and
/// any grid node. 0.5 means every pole sits at a cell midpoint.
double pole_clearance(const FrequencyGrid& grid, const MediumLevels& medium);

/// Returns `grid` unchanged when no node lies within 1e-12 eV of a resonance (γ = 0);
/// otherwise widens W by one part in 10⁶ until none does.
FrequencyGrid avoid_pole_collisions(const FrequencyGrid& grid, const MediumLevels& medium);

}  // namespace vss
