#pragma once

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "vss/medium.hpp"
#include "vss/schmidt.hpp"

namespace vss {

using cplx = std::complex<double>;

/// The six non-vanishing contributions to the two-photon absorption signal
/// (arbitrary units, all prefactors folded to 1).
struct TpaTerms {
  cplx ssss, iiii, sisi, isis, siis, issi;
  cplx total() const noexcept { return ssss + iiii + sisi + isis + siis + issi; }
};

/// A delay-dependent term split into its F₁·F₁ (classical) and F₂·F₂ (quantum) brackets.
struct TermBrackets {
  cplx classical;
  cplx quantum;
  cplx value() const noexcept { return classical + quantum; }
};

struct GroupedSignal {
  double noise = 0.0;
  double classical = 0.0;
  double quantum = 0.0;
  double total = 0.0;
};

struct DelayTrace {
  std::vector<double> delays;  // fs, τ = τ_s − τ_i
  std::vector<GroupedSignal> grouped;

  std::vector<double> totals() const;
  std::vector<double> noise() const;
  std::vector<double> classical() const;
  std::vector<double> quantum() const;
};

/// M uniform delays covering [0, t_max] inclusive.
struct DelaySampling {
  std::size_t points = 1024;
  double t_max = 8000.0;  // fs

  void validate() const;
  std::vector<double> delays() const;
};

/// Spectral functions and medium response on the grid nodes, with the index
/// reversal ε_f − ε_g − ω_i[k] = ω_s[n−1−k] resolved once.
class TpaKernel {
 public:
  TpaKernel(SpectralFunctions functions, const MediumLevels& medium);

  std::size_t size() const noexcept { return n_; }
  double step() const noexcept { return step_; }
  double transition_energy() const noexcept { return transition_; }
  const SpectralFunctions& functions() const noexcept { return f_; }
  const Eigen::VectorXcd& response_signal() const noexcept { return k_s_; }
  const Eigen::VectorXcd& response_idler() const noexcept { return k_i_; }
  double node_signal(std::size_t j) const noexcept { return f_.grid_s.node(j); }
  double node_idler(std::size_t j) const noexcept { return f_.grid_i.node(j); }
  std::size_t reversed(std::size_t j) const noexcept { return n_ - 1 - j; }
  bool degenerate() const noexcept { return degenerate_; }

  // Direct O(n²) double sums, one delay at a time.
  cplx ssss() const;
  cplx iiii() const;
  TermBrackets sisi(double tau) const;
  TermBrackets isis(double tau) const;
  TermBrackets siis(double tau) const;
  TermBrackets issi(double tau) const;

 private:
  SpectralFunctions f_;
  std::size_t n_;
  double step_;
  double transition_;
  bool degenerate_;
  Eigen::VectorXcd k_s_;
  Eigen::VectorXcd k_i_;
};

/// Delay-scan evaluator: O(n²) setup, O(n) per delay. F₂ brackets are rank-1
/// outer products; F₁ brackets collapse onto diagonal (j − k) and anti-diagonal
/// (j + k) sums because the delay phases depend only on those index combinations.
class TpaScanner {
 public:
  explicit TpaScanner(const TpaKernel& kernel);

  cplx ssss() const noexcept { return ssss_; }
  cplx iiii() const noexcept { return iiii_; }
  TermBrackets sisi(double tau) const { return evaluate(tau).sisi; }
  TermBrackets isis(double tau) const { return evaluate(tau).isis; }
  TermBrackets siis(double tau) const { return evaluate(tau).siis; }
  TermBrackets issi(double tau) const { return evaluate(tau).issi; }

  TpaTerms terms(double tau) const;
  GroupedSignal grouped(double tau) const;

 private:
  struct AllBrackets {
    TermBrackets sisi, isis, siis, issi;
  };
  AllBrackets evaluate(double tau) const;

  std::size_t n_;
  double step_;
  double transition_;
  double origin_s_;  // ω_s[0]
  double origin_i_;  // ω_i[0]
  cplx ssss_, iiii_;
  Eigen::VectorXcd quantum_si_;  // K_i[k]·F₂(ε_f − ω_i[k], ω_i[k])
  Eigen::VectorXcd quantum_is_;  // K_s[k]·F₂(ω_s[k], ε_f − ω_s[k])
  std::vector<cplx> diag_sisi_;  // index d + n − 1, d = j − k
  std::vector<cplx> diag_isis_;
  std::vector<cplx> anti_siis_;  // index j + k
  std::vector<cplx> anti_issi_;
};

/// Groups the six terms: noise = ssss + iiii, classical = F₁F₁ brackets,
/// quantum = F₂F₂ brackets. Throws ErrorKind::numerical if any group carries an
/// imaginary residue above 1e-9 of the total.
GroupedSignal group_terms(cplx ssss, cplx iiii, const TermBrackets& sisi, const TermBrackets& isis,
                          const TermBrackets& siis, const TermBrackets& issi);

double term_ssss(const SpectralFunctions& f, const MediumLevels& medium);
double term_iiii(const SpectralFunctions& f, const MediumLevels& medium);
cplx term_sisi(const SpectralFunctions& f, const MediumLevels& medium, double tau);
cplx term_isis(const SpectralFunctions& f, const MediumLevels& medium, double tau);
cplx term_siis(const SpectralFunctions& f, const MediumLevels& medium, double tau);
cplx term_issi(const SpectralFunctions& f, const MediumLevels& medium, double tau);

GroupedSignal grouped_signal(const SpectralFunctions& f, const MediumLevels& medium, double tau);

/// Evaluates the grouped signal at every delay; worker count does not affect the result.
DelayTrace delay_scan(const TpaScanner& scanner, const DelaySampling& sampling, unsigned threads = 1);

struct DelayIntegrals {
  double noise = 0.0;
  double classical = 0.0;
  double quantum = 0.0;
};

/// Trapezoidal integral of each group over the trace's delay range.
DelayIntegrals delay_integrated(const DelayTrace& trace);

}  // namespace vss
