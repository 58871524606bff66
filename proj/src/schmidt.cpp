#include "vss/schmidt.hpp"

#include <cmath>
#include <sstream>

#include "vss/errors.hpp"

namespace vss {

SchmidtDecomposition decompose(const JointAmplitude& amp, double truncation) {
  if (!(truncation >= 0.0 && truncation < 1.0)) {
    fail(ErrorKind::domain, "truncation threshold must lie in [0, 1)");
  }
  const double hs = amp.grid_s.step();
  const double hi = amp.grid_i.step();
  const Eigen::MatrixXcd kernel = std::sqrt(hs * hi) * amp.values;

  Eigen::BDCSVD<Eigen::MatrixXcd> svd(kernel, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (svd.info() != Eigen::Success || !svd.singularValues().allFinite()) {
    std::ostringstream msg;
    msg << "SVD did not converge on a " << kernel.rows() << "x" << kernel.cols()
        << " grid (center_s " << amp.grid_s.center << " eV, W " << amp.grid_s.half_width << " eV)";
    fail(ErrorKind::numerical, msg.str());
  }

  const Eigen::VectorXd& sigma = svd.singularValues();
  const Eigen::MatrixXcd& u = svd.matrixU();
  const Eigen::MatrixXcd& v = svd.matrixV();

  const double kernel_norm = kernel.norm();
  const Eigen::MatrixXcd full = u * sigma.asDiagonal() * v.adjoint();
  const double error = kernel_norm > 0.0 ? (full - kernel).norm() / kernel_norm : 0.0;

  Eigen::Index rank = 0;
  const double cutoff = sigma.size() > 0 ? truncation * sigma(0) : 0.0;
  while (rank < sigma.size() && sigma(rank) > 0.0 && sigma(rank) >= cutoff) ++rank;

  SchmidtDecomposition out;
  out.grid_s = amp.grid_s;
  out.grid_i = amp.grid_i;
  out.lambdas = sigma.head(rank);
  // Φ̃ = Σ σ U conj(V)ᵀ / √(h_s h_i)  ⇒  f_s = conj(U)/√h_s, f_i = V/√h_i.
  out.modes_s = u.leftCols(rank).conjugate() / std::sqrt(hs);
  out.modes_i = v.leftCols(rank) / std::sqrt(hi);
  out.reconstruction_error = error;
  return out;
}

Eigen::MatrixXcd reconstruct(const SchmidtDecomposition& decomp) {
  return decomp.modes_s.conjugate() * decomp.lambdas.asDiagonal() *
         decomp.modes_i.conjugate().transpose();
}

TwinBeamGain mode_gains(const Eigen::VectorXd& lambdas, double gain) {
  if (!(gain >= 0.0)) fail(ErrorKind::domain, "gain must be non-negative");
  TwinBeamGain g;
  g.gain = gain;
  g.u.resize(lambdas.size());
  g.v.resize(lambdas.size());
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    g.u(i) = std::cosh(gain * lambdas(i));
    g.v(i) = std::sinh(gain * lambdas(i));
  }
  return g;
}

TwinBeamGain mode_gains(const SchmidtDecomposition& decomp, double gain) {
  return mode_gains(decomp.lambdas, gain);
}

double photon_number(const TwinBeamGain& gains) noexcept { return gains.v.squaredNorm(); }

namespace {

double occupation(const Eigen::VectorXd& lambdas, double gain) {
  double sum = 0.0;
  for (Eigen::Index i = 0; i < lambdas.size(); ++i) {
    const double s = std::sinh(gain * lambdas(i));
    sum += s * s;
  }
  return sum;
}

}  // namespace

double gain_for_photon_number(const Eigen::VectorXd& lambdas, double target) {
  if (!(target >= 0.0) || !std::isfinite(target)) {
    fail(ErrorKind::domain, "target photon number must be finite and non-negative");
  }
  if (target == 0.0) return 0.0;
  if (lambdas.size() == 0 || !(lambdas(0) > 0.0)) {
    fail(ErrorKind::domain, "no populated Schmidt mode to carry photons");
  }
  double lo = 0.0;
  double hi = 1.0 / lambdas(0);
  while (occupation(lambdas, hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (!std::isfinite(hi) || hi > 1e300) fail(ErrorKind::numerical, "gain bracket overflow");
  }
  for (int iter = 0; iter < 400 && hi - lo > 1e-15 * hi; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (occupation(lambdas, mid) < target) lo = mid;
    else hi = mid;
  }
  const double n_lo = occupation(lambdas, lo);
  const double n_hi = occupation(lambdas, hi);
  return (target - n_lo <= n_hi - target) ? lo : hi;
}

double gain_for_photon_number(const SchmidtDecomposition& decomp, double target) {
  return gain_for_photon_number(decomp.lambdas, target);
}

double schmidt_number_uv(const TwinBeamGain& gains) {
  const double num = gains.u.dot(gains.v);
  const double den = gains.u.cwiseProduct(gains.v).squaredNorm();
  if (!(den > 0.0)) fail(ErrorKind::domain, "K_UV is undefined for the vacuum (all v_g = 0)");
  return num * num / den;
}

SpectralFunctions spectral_functions(const SchmidtDecomposition& decomp, const TwinBeamGain& gains) {
  const auto n = static_cast<Eigen::Index>(decomp.grid_s.points);
  const auto r = decomp.rank();
  if (gains.v.size() != r || gains.u.size() != r) {
    fail(ErrorKind::input, "gains do not match the decomposition rank");
  }
  Eigen::VectorXd root_s(n), root_i(n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double ws = decomp.grid_s.node(static_cast<std::size_t>(j));
    const double wi = decomp.grid_i.node(static_cast<std::size_t>(j));
    if (!(ws > 0.0) || !(wi > 0.0)) {
      fail(ErrorKind::config, "grid reaches non-positive absolute energy; sqrt(w w') undefined");
    }
    root_s(j) = std::sqrt(ws);
    root_i(j) = std::sqrt(wi);
  }

  const Eigen::VectorXd occupation = gains.v.cwiseProduct(gains.v);
  const Eigen::VectorXd coupling = gains.v.cwiseProduct(gains.u);
  const Eigen::MatrixXcd ws_modes = root_s.asDiagonal() * decomp.modes_s;
  const Eigen::MatrixXcd wi_modes = root_i.asDiagonal() * decomp.modes_i;

  SpectralFunctions f;
  f.grid_s = decomp.grid_s;
  f.grid_i = decomp.grid_i;
  f.f1s.noalias() = ws_modes.conjugate() * occupation.asDiagonal() * ws_modes.transpose();
  f.f1i.noalias() = wi_modes.conjugate() * occupation.asDiagonal() * wi_modes.transpose();
  f.f2.noalias() = ws_modes * coupling.asDiagonal() * wi_modes.transpose();
  return f;
}

}  // namespace vss
