#include "vss/medium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "vss/errors.hpp"

namespace vss {

void MediumLevels::validate() const {
  if (!(final_energy > ground_energy)) {
    fail(ErrorKind::config, "medium.final_energy must exceed the ground energy");
  }
  if (levels.empty()) fail(ErrorKind::config, "medium needs at least one intermediate level");
  if (!(linewidth >= 0.0)) fail(ErrorKind::config, "medium.linewidth must be >= 0");
  for (const auto& level : levels) {
    if (!std::isfinite(level.energy) || !std::isfinite(level.dipole_product)) {
      fail(ErrorKind::config, "medium level energies and dipoles must be finite");
    }
  }
}

std::vector<std::string> MediumLevels::warnings() const {
  std::vector<std::string> out;
  for (const auto& level : levels) {
    if (!(level.energy > ground_energy && level.energy < final_energy)) {
      std::ostringstream msg;
      msg << "intermediate level at " << level.energy << " eV lies outside (" << ground_energy
          << ", " << final_energy << ") eV";
      out.push_back(msg.str());
    }
  }
  return out;
}

std::complex<double> response(double omega, const MediumLevels& medium) {
  std::complex<double> sum{0.0, 0.0};
  for (const auto& level : medium.levels) {
    const double detuning = level.energy - medium.ground_energy - omega;
    if (medium.linewidth == 0.0 && std::abs(detuning) < 1e-12) {
      std::ostringstream msg;
      msg << "response evaluated within 1e-12 eV of the pole at " << level.energy
          << " eV with zero linewidth";
      fail(ErrorKind::numerical, msg.str());
    }
    sum += level.dipole_product / std::complex<double>(detuning, -medium.linewidth);
  }
  return sum;
}

MediumLevels paper_default_medium() {
  MediumLevels m;
  m.ground_energy = 0.0;
  m.final_energy = 3.1;
  for (double mismatch : {0.05, 0.075, 0.089}) {
    m.levels.push_back({(m.final_energy + mismatch) / 2.0, 1.0});
  }
  m.linewidth = 0.0;
  return m;
}

MediumLevels random_medium(std::uint64_t seed, std::size_t count, double final_energy,
                           double min_mismatch, double max_mismatch) {
  if (count == 0) fail(ErrorKind::domain, "random medium needs at least one level");
  if (!(max_mismatch > min_mismatch)) fail(ErrorKind::domain, "empty mismatch range");
  std::mt19937_64 engine(seed);
  MediumLevels m;
  m.final_energy = final_energy;
  for (std::size_t k = 0; k < count; ++k) {
    // 53 high bits → [0, 1); std::uniform_real_distribution is not portable across libraries.
    const double unit = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const double mismatch = min_mismatch + unit * (max_mismatch - min_mismatch);
    m.levels.push_back({(final_energy + mismatch) / 2.0, 1.0});
  }
  std::sort(m.levels.begin(), m.levels.end(),
            [](const auto& a, const auto& b) { return a.energy < b.energy; });
  return m;
}

double pole_clearance(const FrequencyGrid& grid, const MediumLevels& medium) {
  const double h = grid.step();
  const double first = grid.node(0);
  double best = std::numeric_limits<double>::infinity();
  for (const auto& level : medium.levels) {
    const double pos = (level.energy - medium.ground_energy - first) / h;
    double dist;
    if (pos < 0.0) dist = -pos;
    else if (pos > static_cast<double>(grid.points - 1)) dist = pos - static_cast<double>(grid.points - 1);
    else dist = std::abs(pos - std::round(pos));
    best = std::min(best, dist);
  }
  return best;
}

FrequencyGrid avoid_pole_collisions(const FrequencyGrid& grid, const MediumLevels& medium) {
  if (medium.linewidth > 0.0) return grid;
  FrequencyGrid out = grid;
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool hit = false;
    for (std::size_t j = 0; j < out.points && !hit; ++j) {
      for (const auto& level : medium.levels) {
        if (std::abs(level.energy - medium.ground_energy - out.node(j)) < 1e-12) {
          hit = true;
          break;
        }
      }
    }
    if (!hit) return out;
    out.half_width *= 1.0 + 1e-6;
  }
  fail(ErrorKind::numerical, "could not move grid nodes off the medium resonances");
}

}  // namespace vss
