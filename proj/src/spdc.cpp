#include "vss/spdc.hpp"

#include <cmath>
#include <complex>

#include "vss/errors.hpp"
#include "vss/units.hpp"

namespace vss {

void PumpParams::validate() const {
  if (!(center_energy > 0.0)) fail(ErrorKind::config, "pump.center_energy must be positive");
  if (!(duration > 0.0)) fail(ErrorKind::config, "pump.duration must be positive");
}

void CrystalParams::validate() const {
  if (!(length > 0.0)) fail(ErrorKind::config, "crystal.length must be positive");
  if (!std::isfinite(inv_gv_signal_ps_per_mm) || !std::isfinite(inv_gv_idler_ps_per_mm)) {
    fail(ErrorKind::config, "crystal inverse group velocities must be finite");
  }
}

double JointAmplitude::weighted_norm_squared() const {
  return grid_s.step() * grid_i.step() * values.squaredNorm();
}

double sinc(double x) noexcept {
  const double ax = std::abs(x);
  if (ax < 1e-4) {
    const double x2 = x * x;
    return 1.0 - x2 / 6.0 + x2 * x2 / 120.0;
  }
  return std::sin(x) / x;
}

double pump_envelope(double sum_detuning, const PumpParams& pump) noexcept {
  const double t = pump.duration / kHbarEvFs;  // fs per (eV/ħ): dimensionless with ν in eV
  return std::sqrt(pump.duration / std::sqrt(kTwoPi)) *
         std::exp(-t * t * sum_detuning * sum_detuning / 4.0);
}

double phase_mismatch(double detuning_s, double detuning_i, const CrystalParams& crystal) noexcept {
  const double half_walkoff =
      0.5 * (crystal.inv_gv_idler_ps_per_mm - crystal.inv_gv_signal_ps_per_mm) *
      kSecondsPerMetrePerPsPerMm;                                   // s/m
  const double angular = (detuning_s - detuning_i) / kHbarEvFs * kFsPerSecond;  // rad/s
  return half_walkoff * angular;
}

JointAmplitude build_joint_amplitude(const PumpParams& pump, const CrystalParams& crystal,
                                     const FrequencyGrid& grid_s, const FrequencyGrid& grid_i) {
  pump.validate();
  crystal.validate();
  require_aligned(grid_s, grid_i, pump.center_energy);

  const auto n = static_cast<Eigen::Index>(grid_s.points);
  const double t = pump.duration / kHbarEvFs;
  JointAmplitude amp{grid_s, grid_i, Eigen::MatrixXcd(n, n), 0.0, false};
  for (Eigen::Index k = 0; k < n; ++k) {
    const double nu_i = grid_i.detuning(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < n; ++j) {
      const double nu_s = grid_s.detuning(static_cast<std::size_t>(j));
      const double half_phase = 0.5 * phase_mismatch(nu_s, nu_i, crystal) * crystal.length;
      const double sum = nu_s + nu_i;
      const double envelope = std::exp(-t * t * sum * sum / 4.0);
      amp.values(j, k) = sinc(half_phase) * envelope * std::polar(1.0, -half_phase);
    }
  }
  return amp;
}

JointAmplitude normalize(const JointAmplitude& amp) {
  const double norm = std::sqrt(amp.weighted_norm_squared());
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    fail(ErrorKind::domain, "cannot normalize an all-zero joint amplitude");
  }
  JointAmplitude out = amp;
  out.values /= norm;
  out.norm_factor = norm;
  out.normalized = true;
  return out;
}

double correlation_coefficient(const JointAmplitude& amp) {
  const double weight = amp.grid_s.step() * amp.grid_i.step();
  const auto n_s = amp.values.rows();
  const auto n_i = amp.values.cols();
  double total = 0.0, mean_s = 0.0, mean_i = 0.0;
  for (Eigen::Index k = 0; k < n_i; ++k) {
    const double nu_i = amp.grid_i.detuning(static_cast<std::size_t>(k));
    for (Eigen::Index j = 0; j < n_s; ++j) {
      const double p = std::norm(amp.values(j, k)) * weight;
      total += p;
      mean_s += p * amp.grid_s.detuning(static_cast<std::size_t>(j));
      mean_i += p * nu_i;
    }
  }
  if (!(total > 0.0)) fail(ErrorKind::domain, "correlation of an all-zero amplitude is undefined");
  mean_s /= total;
  mean_i /= total;
  double var_s = 0.0, var_i = 0.0, cov = 0.0;
  for (Eigen::Index k = 0; k < n_i; ++k) {
    const double di = amp.grid_i.detuning(static_cast<std::size_t>(k)) - mean_i;
    for (Eigen::Index j = 0; j < n_s; ++j) {
      const double p = std::norm(amp.values(j, k)) * weight;
      const double ds = amp.grid_s.detuning(static_cast<std::size_t>(j)) - mean_s;
      var_s += p * ds * ds;
      var_i += p * di * di;
      cov += p * ds * di;
    }
  }
  const double scale = std::max(var_s, var_i);
  if (!(var_s > 1e-14 * scale) || !(var_i > 1e-14 * scale) || !(scale > 0.0)) {
    fail(ErrorKind::domain, "correlation undefined: zero variance along a frequency axis");
  }
  return cov / std::sqrt(var_s * var_i);
}

}  // namespace vss
