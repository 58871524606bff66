#pragma once

#include <Eigen/Dense>

#include "vss/grid.hpp"

namespace vss {

struct PumpParams {
  double center_energy = 3.1;  // eV, ħω_p⁰
  double duration = 1000.0;    // fs, τ_p

  void validate() const;
};

/// Type-II crystal under the group-velocity-matching condition G_p = (G_s + G_i)/2.
struct CrystalParams {
  double length = 1e-3;                    // m
  double inv_gv_signal_ps_per_mm = 5.2;    // G_s
  double inv_gv_idler_ps_per_mm = 5.6;     // G_i

  double inv_gv_pump_ps_per_mm() const noexcept {
    return 0.5 * (inv_gv_signal_ps_per_mm + inv_gv_idler_ps_per_mm);
  }
  void validate() const;
};

/// Discretized two-photon spectral amplitude; rows index ω_s, columns ω_i.
struct JointAmplitude {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  Eigen::MatrixXcd values;
  double norm_factor = 0.0;
  bool normalized = false;

  /// Δω_s·Δω_i·Σ|Φ|².
  double weighted_norm_squared() const;
};

double sinc(double x) noexcept;

/// Gaussian pump spectral amplitude at ω_s + ω_i − ω_p⁰ = sum_detuning (eV),
/// without the ξ_p amplitude.
double pump_envelope(double sum_detuning, const PumpParams& pump) noexcept;

/// Linearized Δk_z in rad/m for signal/idler detunings in eV.
double phase_mismatch(double detuning_s, double detuning_i, const CrystalParams& crystal) noexcept;

JointAmplitude build_joint_amplitude(const PumpParams& pump, const CrystalParams& crystal,
                                     const FrequencyGrid& grid_s, const FrequencyGrid& grid_i);

JointAmplitude normalize(const JointAmplitude& amp);

/// Pearson correlation of (ν_s, ν_i) under the weight |Φ̃|²Δω_sΔω_i.
double correlation_coefficient(const JointAmplitude& amp);

}  // namespace vss
