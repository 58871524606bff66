#pragma once

#include <cstddef>

namespace vss {

/// Uniform energy grid ω[j] = center − W + j·2W/(n−1), j = 0..n−1.
struct FrequencyGrid {
  double center = 1.55;        // eV
  double half_width = 0.127875;  // eV
  std::size_t points = 1024;

  double step() const noexcept { return 2.0 * half_width / static_cast<double>(points - 1); }
  double detuning(std::size_t j) const noexcept {
    return -half_width + static_cast<double>(j) * step();
  }
  double node(std::size_t j) const noexcept { return center + detuning(j); }

  /// Throws ErrorKind::config unless n ≥ 8, n even, W > 0.
  void validate() const;
};

/// Throws ErrorKind::config unless the signal and idler grids share W and n and
/// their centers sum to `final_energy` within 1e-9 eV, so that
/// final_energy − ω_i[k] == ω_s[n−1−k].
void require_aligned(const FrequencyGrid& signal, const FrequencyGrid& idler, double final_energy);

bool same_shape(const FrequencyGrid& a, const FrequencyGrid& b) noexcept;

}  // namespace vss
