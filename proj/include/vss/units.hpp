#pragma once

#include <numbers>

namespace vss {

// Energies in eV (ħω), times in fs.
inline constexpr double kHbarEvFs = 0.6582119569;
inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// 1 ps/mm = 1e-9 s/m; 1 rad/fs = 1e15 rad/s.
inline constexpr double kSecondsPerMetrePerPsPerMm = 1e-9;
inline constexpr double kFsPerSecond = 1e15;

}  // namespace vss
