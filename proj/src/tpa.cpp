#include "vss/tpa.hpp"

#include <cmath>
#include <sstream>

#include "vss/errors.hpp"
#include "vss/parallel.hpp"
#include "vss/units.hpp"

namespace vss {

namespace {

std::vector<double> project(const std::vector<GroupedSignal>& g, double GroupedSignal::*field) {
  std::vector<double> out;
  out.reserve(g.size());
  for (const auto& s : g) out.push_back(s.*field);
  return out;
}

// e^{iφ} with φ in radians.
inline cplx phase(double phi) { return {std::cos(phi), std::sin(phi)}; }

}  // namespace

std::vector<double> DelayTrace::totals() const { return project(grouped, &GroupedSignal::total); }
std::vector<double> DelayTrace::noise() const { return project(grouped, &GroupedSignal::noise); }
std::vector<double> DelayTrace::classical() const {
  return project(grouped, &GroupedSignal::classical);
}
std::vector<double> DelayTrace::quantum() const { return project(grouped, &GroupedSignal::quantum); }

void DelaySampling::validate() const {
  if (points < 16) {
    fail(ErrorKind::config, "scan.points must be >= 16, got " + std::to_string(points));
  }
  if (!(t_max > 0.0) || !std::isfinite(t_max)) fail(ErrorKind::config, "scan.t_max must be > 0");
}

std::vector<double> DelaySampling::delays() const {
  validate();
  std::vector<double> out(points);
  const double dt = t_max / static_cast<double>(points - 1);
  for (std::size_t m = 0; m < points; ++m) out[m] = static_cast<double>(m) * dt;
  out.back() = t_max;
  return out;
}

// ---------------------------------------------------------------------------

TpaKernel::TpaKernel(SpectralFunctions functions, const MediumLevels& medium)
    : f_(std::move(functions)) {
  medium.validate();
  transition_ = medium.final_energy - medium.ground_energy;
  require_aligned(f_.grid_s, f_.grid_i, transition_);
  n_ = f_.grid_s.points;
  const auto n = static_cast<Eigen::Index>(n_);
  if (f_.f1s.rows() != n || f_.f1s.cols() != n || f_.f1i.rows() != n || f_.f1i.cols() != n ||
      f_.f2.rows() != n || f_.f2.cols() != n) {
    fail(ErrorKind::input, "spectral function matrices do not match the grid size");
  }
  step_ = f_.grid_s.step();
  degenerate_ = std::abs(f_.grid_s.center - f_.grid_i.center) <= 1e-12;
  k_s_.resize(n);
  k_i_.resize(n);
  for (std::size_t j = 0; j < n_; ++j) {
    k_s_(static_cast<Eigen::Index>(j)) = response(f_.grid_s.node(j), medium);
    k_i_(static_cast<Eigen::Index>(j)) = response(f_.grid_i.node(j), medium);
  }
}

// In ssss the argument ε_f − ω_s must itself be a signal-grid node, which holds
// only when both beams share a grid.
cplx TpaKernel::ssss() const {
  if (!degenerate_) fail(ErrorKind::config, "ssss needs identical signal and idler grids");
  const auto& F = f_.f1s;
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < n_; ++j) {
    const auto J = static_cast<Eigen::Index>(j), RJ = static_cast<Eigen::Index>(reversed(j));
    cplx row{0.0, 0.0};
    for (std::size_t k = 0; k < n_; ++k) {
      const auto K = static_cast<Eigen::Index>(k), RK = static_cast<Eigen::Index>(reversed(k));
      row += k_s_(K) * (F(RJ, K) * F(J, RK) + F(RJ, RK) * F(J, K));
    }
    sum += std::conj(k_s_(J)) * row;
  }
  return step_ * step_ * sum;
}

cplx TpaKernel::iiii() const {
  if (!degenerate_) fail(ErrorKind::config, "iiii needs identical signal and idler grids");
  const auto& F = f_.f1i;
  cplx sum{0.0, 0.0};
  for (std::size_t j = 0; j < n_; ++j) {
    const auto J = static_cast<Eigen::Index>(j), RJ = static_cast<Eigen::Index>(reversed(j));
    cplx row{0.0, 0.0};
    for (std::size_t k = 0; k < n_; ++k) {
      const auto K = static_cast<Eigen::Index>(k), RK = static_cast<Eigen::Index>(reversed(k));
      row += k_i_(K) * (F(RJ, K) * F(J, RK) + F(RJ, RK) * F(J, K));
    }
    sum += std::conj(k_i_(J)) * row;
  }
  return step_ * step_ * sum;
}

TermBrackets TpaKernel::sisi(double tau) const {
  TermBrackets out{};
  for (std::size_t j = 0; j < n_; ++j) {
    const auto J = static_cast<Eigen::Index>(j), RJ = static_cast<Eigen::Index>(reversed(j));
    for (std::size_t k = 0; k < n_; ++k) {
      const auto K = static_cast<Eigen::Index>(k), RK = static_cast<Eigen::Index>(reversed(k));
      const cplx w = std::conj(k_i_(J)) * k_i_(K) *
                     phase(-(node_idler(j) - node_idler(k)) * tau / kHbarEvFs);
      out.quantum += w * std::conj(f_.f2(RJ, J)) * f_.f2(RK, K);
      out.classical += w * f_.f1i(J, K) * f_.f1s(RJ, RK);
    }
  }
  out.quantum *= step_ * step_;
  out.classical *= step_ * step_;
  return out;
}

TermBrackets TpaKernel::isis(double tau) const {
  TermBrackets out{};
  for (std::size_t j = 0; j < n_; ++j) {
    const auto J = static_cast<Eigen::Index>(j), RJ = static_cast<Eigen::Index>(reversed(j));
    for (std::size_t k = 0; k < n_; ++k) {
      const auto K = static_cast<Eigen::Index>(k), RK = static_cast<Eigen::Index>(reversed(k));
      const cplx w = std::conj(k_s_(J)) * k_s_(K) *
                     phase((node_signal(j) - node_signal(k)) * tau / kHbarEvFs);
      out.quantum += w * std::conj(f_.f2(J, RJ)) * f_.f2(K, RK);
      out.classical += w * f_.f1s(J, K) * f_.f1i(RJ, RK);
    }
  }
  out.quantum *= step_ * step_;
  out.classical *= step_ * step_;
  return out;
}

TermBrackets TpaKernel::siis(double tau) const {
  TermBrackets out{};
  for (std::size_t j = 0; j < n_; ++j) {
    const auto J = static_cast<Eigen::Index>(j), RJ = static_cast<Eigen::Index>(reversed(j));
    for (std::size_t k = 0; k < n_; ++k) {
      const auto K = static_cast<Eigen::Index>(k), RK = static_cast<Eigen::Index>(reversed(k));
      const cplx w = std::conj(k_i_(J)) * k_s_(K) *
                     phase((transition_ - node_idler(j) - node_signal(k)) * tau / kHbarEvFs);
      out.quantum += w * std::conj(f_.f2(RJ, J)) * f_.f2(K, RK);
      out.classical += w * f_.f1s(RJ, K) * f_.f1i(J, RK);
    }
  }
  out.quantum *= step_ * step_;
  out.classical *= step_ * step_;
  return out;
}

TermBrackets TpaKernel::issi(double tau) const {
  TermBrackets out{};
  for (std::size_t j = 0; j < n_; ++j) {
    const auto J = static_cast<Eigen::Index>(j), RJ = static_cast<Eigen::Index>(reversed(j));
    for (std::size_t k = 0; k < n_; ++k) {
      const auto K = static_cast<Eigen::Index>(k), RK = static_cast<Eigen::Index>(reversed(k));
      const cplx w = std::conj(k_s_(J)) * k_i_(K) *
                     phase(-(transition_ - node_signal(j) - node_idler(k)) * tau / kHbarEvFs);
      out.quantum += w * std::conj(f_.f2(J, RJ)) * f_.f2(RK, K);
      out.classical += w * f_.f1i(RJ, K) * f_.f1s(J, RK);
    }
  }
  out.quantum *= step_ * step_;
  out.classical *= step_ * step_;
  return out;
}

// ---------------------------------------------------------------------------

TpaScanner::TpaScanner(const TpaKernel& kernel)
    : n_(kernel.size()),
      step_(kernel.step()),
      transition_(kernel.transition_energy()),
      origin_s_(kernel.node_signal(0)),
      origin_i_(kernel.node_idler(0)) {
  const auto& f = kernel.functions();
  const auto& ks = kernel.response_signal();
  const auto& ki = kernel.response_idler();
  const auto n = static_cast<Eigen::Index>(n_);
  auto rev = [n](Eigen::Index j) { return n - 1 - j; };

  if (kernel.degenerate()) {
    ssss_ = kernel.ssss();
    iiii_ = kernel.iiii();
  } else {
    ssss_ = iiii_ = cplx{0.0, 0.0};
  }

  quantum_si_.resize(n);
  quantum_is_.resize(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    quantum_si_(k) = ki(k) * f.f2(rev(k), k);
    quantum_is_(k) = ks(k) * f.f2(k, rev(k));
  }

  const std::size_t span = 2 * n_ - 1;
  diag_sisi_.assign(span, cplx{0.0, 0.0});
  diag_isis_.assign(span, cplx{0.0, 0.0});
  anti_siis_.assign(span, cplx{0.0, 0.0});
  anti_issi_.assign(span, cplx{0.0, 0.0});
  for (Eigen::Index j = 0; j < n; ++j) {
    const cplx cki = std::conj(ki(j));
    const cplx cks = std::conj(ks(j));
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto d = static_cast<std::size_t>(j - k + n - 1);
      const auto s = static_cast<std::size_t>(j + k);
      diag_sisi_[d] += cki * ki(k) * f.f1i(j, k) * f.f1s(rev(j), rev(k));
      diag_isis_[d] += cks * ks(k) * f.f1s(j, k) * f.f1i(rev(j), rev(k));
      anti_siis_[s] += cki * ks(k) * f.f1s(rev(j), k) * f.f1i(j, rev(k));
      anti_issi_[s] += cks * ki(k) * f.f1i(rev(j), k) * f.f1s(j, rev(k));
    }
  }
}

TpaScanner::AllBrackets TpaScanner::evaluate(double tau) const {
  const double theta = step_ * tau / kHbarEvFs;
  const std::size_t span = 2 * n_ - 1;
  // z[m] = e^{−i m θ}
  std::vector<cplx> z(span);
  for (std::size_t m = 0; m < span; ++m) z[m] = phase(-static_cast<double>(m) * theta);

  // a = Σ K_i F₂(R k, k) e^{+iω_i τ},  b = Σ K_s F₂(k, R k) e^{−iω_s τ}
  cplx a{0.0, 0.0}, b{0.0, 0.0};
  for (std::size_t k = 0; k < n_; ++k) {
    a += quantum_si_(static_cast<Eigen::Index>(k)) * std::conj(z[k]);
    b += quantum_is_(static_cast<Eigen::Index>(k)) * z[k];
  }
  a *= phase(origin_i_ * tau / kHbarEvFs);
  b *= phase(-origin_s_ * tau / kHbarEvFs);

  cplx c_sisi{0.0, 0.0}, c_isis{0.0, 0.0};
  const auto mid = static_cast<std::ptrdiff_t>(n_ - 1);
  for (std::size_t idx = 0; idx < span; ++idx) {
    const std::ptrdiff_t d = static_cast<std::ptrdiff_t>(idx) - mid;
    const cplx zd = d >= 0 ? z[static_cast<std::size_t>(d)] : std::conj(z[static_cast<std::size_t>(-d)]);
    c_sisi += diag_sisi_[idx] * zd;
    c_isis += diag_isis_[idx] * std::conj(zd);
  }
  cplx c_siis{0.0, 0.0}, c_issi{0.0, 0.0};
  for (std::size_t s = 0; s < span; ++s) {
    c_siis += anti_siis_[s] * z[s];
    c_issi += anti_issi_[s] * std::conj(z[s]);
  }
  const cplx carrier = phase((transition_ - origin_s_ - origin_i_) * tau / kHbarEvFs);
  const cplx eft = phase(transition_ * tau / kHbarEvFs);
  const double h2 = step_ * step_;

  AllBrackets out;
  out.sisi = {h2 * c_sisi, h2 * std::norm(a)};
  out.isis = {h2 * c_isis, h2 * std::norm(b)};
  out.siis = {h2 * carrier * c_siis, h2 * eft * std::conj(a) * b};
  out.issi = {h2 * std::conj(carrier) * c_issi, h2 * std::conj(eft) * std::conj(b) * a};
  return out;
}

TpaTerms TpaScanner::terms(double tau) const {
  const auto br = evaluate(tau);
  return {ssss_, iiii_, br.sisi.value(), br.isis.value(), br.siis.value(), br.issi.value()};
}

GroupedSignal TpaScanner::grouped(double tau) const {
  const auto br = evaluate(tau);
  return group_terms(ssss_, iiii_, br.sisi, br.isis, br.siis, br.issi);
}

// ---------------------------------------------------------------------------

GroupedSignal group_terms(cplx ssss, cplx iiii, const TermBrackets& sisi, const TermBrackets& isis,
                          const TermBrackets& siis, const TermBrackets& issi) {
  const cplx noise = ssss + iiii;
  const cplx classical = sisi.classical + isis.classical + siis.classical + issi.classical;
  const cplx quantum = sisi.quantum + isis.quantum + siis.quantum + issi.quantum;
  const double scale = std::abs(noise.real()) + std::abs(classical.real()) + std::abs(quantum.real());
  const double limit = 1e-9 * scale;
  auto check = [&](const char* name, cplx value) {
    if (std::abs(value.imag()) > limit) {
      std::ostringstream msg;
      msg << name << " group has imaginary residue " << value.imag() << " against total scale "
          << scale;
      fail(ErrorKind::numerical, msg.str());
    }
  };
  check("noise", noise);
  check("classical", classical);
  check("quantum", quantum);

  GroupedSignal g;
  g.noise = noise.real();
  g.classical = classical.real();
  g.quantum = quantum.real();
  g.total = g.noise + g.classical + g.quantum;
  return g;
}

double term_ssss(const SpectralFunctions& f, const MediumLevels& medium) {
  return TpaKernel(f, medium).ssss().real();
}
double term_iiii(const SpectralFunctions& f, const MediumLevels& medium) {
  return TpaKernel(f, medium).iiii().real();
}
cplx term_sisi(const SpectralFunctions& f, const MediumLevels& medium, double tau) {
  return TpaKernel(f, medium).sisi(tau).value();
}
cplx term_isis(const SpectralFunctions& f, const MediumLevels& medium, double tau) {
  return TpaKernel(f, medium).isis(tau).value();
}
cplx term_siis(const SpectralFunctions& f, const MediumLevels& medium, double tau) {
  return TpaKernel(f, medium).siis(tau).value();
}
cplx term_issi(const SpectralFunctions& f, const MediumLevels& medium, double tau) {
  return TpaKernel(f, medium).issi(tau).value();
}

GroupedSignal grouped_signal(const SpectralFunctions& f, const MediumLevels& medium, double tau) {
  return TpaScanner(TpaKernel(f, medium)).grouped(tau);
}

DelayTrace delay_scan(const TpaScanner& scanner, const DelaySampling& sampling, unsigned threads) {
  DelayTrace trace;
  trace.delays = sampling.delays();
  trace.grouped.resize(trace.delays.size());
  parallel_for(trace.delays.size(), threads,
               [&](std::size_t m) { trace.grouped[m] = scanner.grouped(trace.delays[m]); });
  return trace;
}

DelayIntegrals delay_integrated(const DelayTrace& trace) {
  DelayIntegrals out;
  if (trace.delays.size() != trace.grouped.size()) {
    fail(ErrorKind::input, "delay trace length mismatch");
  }
  for (std::size_t m = 1; m < trace.delays.size(); ++m) {
    const double dt = trace.delays[m] - trace.delays[m - 1];
    const auto& a = trace.grouped[m - 1];
    const auto& b = trace.grouped[m];
    out.noise += 0.5 * dt * (a.noise + b.noise);
    out.classical += 0.5 * dt * (a.classical + b.classical);
    out.quantum += 0.5 * dt * (a.quantum + b.quantum);
  }
  return out;
}

}  // namespace vss
