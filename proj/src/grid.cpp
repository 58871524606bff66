#include "vss/grid.hpp"

#include <cmath>
#include <string>

#include "vss/errors.hpp"

namespace vss {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::config: return "configuration error";
    case ErrorKind::domain: return "domain error";
    case ErrorKind::input: return "input error";
    case ErrorKind::numerical: return "numerical error";
    case ErrorKind::io: return "I/O error";
  }
  return "error";
}

void FrequencyGrid::validate() const {
  if (points < 8 || points % 2 != 0) {
    fail(ErrorKind::config, "grid.points must be even and >= 8, got " + std::to_string(points));
  }
  if (!(half_width > 0.0) || !std::isfinite(half_width)) {
    fail(ErrorKind::config, "grid.half_width must be positive");
  }
  if (!std::isfinite(center)) fail(ErrorKind::config, "grid.center must be finite");
}

bool same_shape(const FrequencyGrid& a, const FrequencyGrid& b) noexcept {
  return a.points == b.points && a.half_width == b.half_width;
}

void require_aligned(const FrequencyGrid& signal, const FrequencyGrid& idler, double final_energy) {
  signal.validate();
  idler.validate();
  if (!same_shape(signal, idler)) {
    fail(ErrorKind::config, "signal and idler grids must share half_width and points");
  }
  if (std::abs(signal.center + idler.center - final_energy) > 1e-9) {
    fail(ErrorKind::config, "grid misalignment: center_s + center_i = " +
                                std::to_string(signal.center + idler.center) +
                                " eV but final energy is " + std::to_string(final_energy) + " eV");
  }
}

}  // namespace vss
