#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "vss/config.hpp"
#include "vss/errors.hpp"

namespace vss {

inline constexpr const char* kVersion = "0.1.0";

struct CommandOptions {
  std::filesystem::path out_dir = "out";
  unsigned threads = 0;  // 0 = hardware concurrency
  std::uint64_t seed = 0;
};

/// Files written (relative names inside out_dir) and a one-line summary for stdout.
struct CommandResult {
  std::vector<std::string> files;
  std::string summary;
};

CommandResult cmd_joint_spectrum(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_schmidt(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_spectrogram(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_ensemble(const RunConfig& config, const CommandOptions& options);
CommandResult cmd_flux_sweep(const RunConfig& config, const CommandOptions& options);

/// Dispatches on the subcommand name; throws ErrorKind::config for unknown names.
CommandResult run_command(const std::string& name, const RunConfig& config,
                          const CommandOptions& options);

/// 2 configuration/domain/input, 3 numerical, 4 I/O.
int exit_code(ErrorKind kind) noexcept;

}  // namespace vss
