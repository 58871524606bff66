#pragma once

#include <algorithm>
#include <cmath>
#include <complex>

#include "vss/model.hpp"

namespace fixtures {

// Small but non-trivial twin beam: short pump and a long crystal so several Schmidt
// modes and both correlation brackets carry weight.
inline vss::ModelConfig small_model(std::size_t n, double half_width = 0.06) {
  vss::ModelConfig cfg;
  cfg.grid.points = n;
  cfg.grid.half_width = half_width;
  cfg.pump.duration = 60.0;
  cfg.crystal.length = 4e-3;
  cfg.medium = vss::paper_default_medium();
  cfg.grid = vss::avoid_pole_collisions(cfg.grid, cfg.medium);
  return cfg;
}

inline vss::SpectralFunctions functions_at(const vss::ModelConfig& cfg, double photons) {
  return vss::beam_at(vss::prepare_twin_beam(cfg), photons).functions;
}

inline double rel_diff(std::complex<double> a, std::complex<double> b, double scale) {
  return std::abs(a - b) / scale;
}

}  // namespace fixtures
