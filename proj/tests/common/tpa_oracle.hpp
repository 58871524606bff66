#pragma once

// Literal transcription of the TPA integral families, written against
// frequency-valued functions. Frequencies are mapped back to grid nodes by
// rounding, so nothing here relies on the library's index-reversal shortcut.

#include <cmath>
#include <complex>
#include <functional>
#include <stdexcept>

#include "vss/medium.hpp"
#include "vss/schmidt.hpp"
#include "vss/units.hpp"

namespace oracle {

using cd = std::complex<double>;

struct TpaOracle {
  vss::SpectralFunctions f;
  vss::MediumLevels medium;

  double ef() const { return medium.final_energy - medium.ground_energy; }
  double h() const { return f.grid_s.step(); }

  static Eigen::Index at(const vss::FrequencyGrid& g, double w) {
    const double pos = (w - g.node(0)) / g.step();
    const double idx = std::round(pos);
    if (std::abs(pos - idx) > 1e-6 || idx < 0 || idx >= static_cast<double>(g.points)) {
      throw std::logic_error("oracle: frequency is not a grid node");
    }
    return static_cast<Eigen::Index>(idx);
  }
  cd F1s(double w, double w2) const { return f.f1s(at(f.grid_s, w), at(f.grid_s, w2)); }
  cd F1i(double w, double w2) const { return f.f1i(at(f.grid_i, w), at(f.grid_i, w2)); }
  cd F2(double ws, double wi) const { return f.f2(at(f.grid_s, ws), at(f.grid_i, wi)); }
  // Signal/idler roles exchanged: F₂^{is}(ω_i, ω_s) = F₂(ω_s, ω_i).
  cd F2is(double wi, double ws) const { return F2(ws, wi); }
  cd K(double w) const { return vss::response(w, medium); }
  cd e(double phase_ev_fs) const { return std::exp(cd(0.0, phase_ev_fs / vss::kHbarEvFs)); }

  cd sum(const vss::FrequencyGrid& ga, const vss::FrequencyGrid& gb,
         const std::function<cd(double, double)>& body) const {
    cd s = 0.0;
    for (std::size_t j = 0; j < ga.points; ++j)
      for (std::size_t k = 0; k < gb.points; ++k) s += body(ga.node(j), gb.node(k));
    return h() * h() * s;
  }

  cd ssss() const {
    return sum(f.grid_s, f.grid_s, [&](double w, double w2) {
      return std::conj(K(w)) * K(w2) *
             (F1s(ef() - w, w2) * F1s(w, ef() - w2) + F1s(ef() - w, ef() - w2) * F1s(w, w2));
    });
  }
  cd iiii() const {
    return sum(f.grid_i, f.grid_i, [&](double w, double w2) {
      return std::conj(K(w)) * K(w2) *
             (F1i(ef() - w, w2) * F1i(w, ef() - w2) + F1i(ef() - w, ef() - w2) * F1i(w, w2));
    });
  }
  cd sisi(double tau) const {
    return sum(f.grid_i, f.grid_i, [&](double wi, double wi2) {
      return std::conj(K(wi)) * K(wi2) * e(-(wi - wi2) * tau) *
             (std::conj(F2(ef() - wi, wi)) * F2(ef() - wi2, wi2) +
              F1i(wi, wi2) * F1s(ef() - wi, ef() - wi2));
    });
  }
  cd isis(double tau) const {
    return sum(f.grid_s, f.grid_s, [&](double ws, double ws2) {
      return std::conj(K(ws)) * K(ws2) * e((ws - ws2) * tau) *
             (std::conj(F2is(ef() - ws, ws)) * F2is(ef() - ws2, ws2) +
              F1s(ws, ws2) * F1i(ef() - ws, ef() - ws2));
    });
  }
  cd siis(double tau) const {
    return sum(f.grid_i, f.grid_s, [&](double wi, double ws) {
      return std::conj(K(wi)) * K(ws) * e((ef() - wi - ws) * tau) *
             (std::conj(F2(ef() - wi, wi)) * F2(ws, ef() - ws) +
              F1s(ef() - wi, ws) * F1i(wi, ef() - ws));
    });
  }
  cd issi(double tau) const {
    return sum(f.grid_s, f.grid_i, [&](double ws, double wi) {
      return std::conj(K(ws)) * K(wi) * e(-(ef() - ws - wi) * tau) *
             (std::conj(F2is(ef() - ws, ws)) * F2is(wi, ef() - wi) +
              F1i(ef() - ws, wi) * F1s(ws, ef() - wi));
    });
  }
};

inline double relative(cd a, cd b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

}  // namespace oracle
