#pragma once

#include <Eigen/Dense>

#include "vss/grid.hpp"
#include "vss/spdc.hpp"

namespace vss {

/// Φ̃(ω_s, ω_i) = Σ_g λ_g f*_{s,g}(ω_s) f*_{i,g}(ω_i), modes sampled on the grids and
/// orthonormal under the Δω quadrature.
struct SchmidtDecomposition {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  Eigen::VectorXd lambdas;    // descending
  Eigen::MatrixXcd modes_s;   // n × r, column g = f_{s,g}
  Eigen::MatrixXcd modes_i;   // n × r
  double reconstruction_error = 0.0;  // Frobenius, relative, before truncation

  Eigen::Index rank() const noexcept { return lambdas.size(); }
  double step_s() const noexcept { return grid_s.step(); }
  double step_i() const noexcept { return grid_i.step(); }
};

/// Bogoliubov factors u_g = cosh(G·λ_g), v_g = sinh(G·λ_g).
struct TwinBeamGain {
  double gain = 0.0;
  Eigen::VectorXd u;
  Eigen::VectorXd v;
};

/// F₁s, F₁i (single-beam) and F₂ (cross-beam) correlation functions on the grid nodes.
struct SpectralFunctions {
  FrequencyGrid grid_s;
  FrequencyGrid grid_i;
  Eigen::MatrixXcd f1s;
  Eigen::MatrixXcd f1i;
  Eigen::MatrixXcd f2;  // rows: signal frequency, columns: idler frequency
};

inline constexpr double kDefaultTruncation = 1e-8;

/// SVD of the quadrature-weighted kernel √Δω_s·Φ̃·√Δω_i. Modes with
/// λ_g < truncation·λ_1 are dropped.
SchmidtDecomposition decompose(const JointAmplitude& amp, double truncation = kDefaultTruncation);

/// Σ_g λ_g f*_{s,g} f*_{i,g}^T over the retained modes.
Eigen::MatrixXcd reconstruct(const SchmidtDecomposition& decomp);

TwinBeamGain mode_gains(const SchmidtDecomposition& decomp, double gain);
TwinBeamGain mode_gains(const Eigen::VectorXd& lambdas, double gain);

double photon_number(const TwinBeamGain& gains) noexcept;

/// Inverts N_s(G) = Σ sinh²(G·λ_g) by bracketed bisection.
double gain_for_photon_number(const SchmidtDecomposition& decomp, double target);
double gain_for_photon_number(const Eigen::VectorXd& lambdas, double target);

/// K_UV = (Σ u_g v_g)² / Σ u_g² v_g².
double schmidt_number_uv(const TwinBeamGain& gains);

SpectralFunctions spectral_functions(const SchmidtDecomposition& decomp, const TwinBeamGain& gains);

}  // namespace vss
