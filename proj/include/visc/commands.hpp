#pragma once

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>

#include "visc/config.hpp"
#include "visc/error.hpp"

namespace visc {

enum class Command { Solve, Implicit, Experiment, Tables, Check };

[[nodiscard]] Command parse_command(const std::string& name);
[[nodiscard]] const char* to_string(Command c) noexcept;

inline constexpr int kExitOk = 0;
inline constexpr int kExitOther = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitDivergence = 3;
inline constexpr int kExitIo = 4;

[[nodiscard]] int exit_code_for(ErrorKind kind) noexcept;

/// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "VISC_OUT_DIR";

struct CliRequest {
  Command command = Command::Solve;
  std::optional<std::filesystem::path> config_path;
  Overrides overrides;
  /// Metadata file of an earlier run whose keys are applied as overrides.
  std::optional<std::filesystem::path> replay;
  /// `tables` only: rebuild the tables from an existing report.csv.
  std::optional<std::filesystem::path> report;
};

/// The `out` override, else $VISC_OUT_DIR, else ./out.
[[nodiscard]] std::filesystem::path output_dir(const ParsedConfig& cfg);

/// Digest of the configuration a command actually consumes.
[[nodiscard]] std::string command_digest(Command c, const ParsedConfig& cfg);

/// Runs one command. Progress goes to `out`, warnings and errors to `err`.
[[nodiscard]] int run_command(const CliRequest& request, std::ostream& out, std::ostream& err);

}  // namespace visc
