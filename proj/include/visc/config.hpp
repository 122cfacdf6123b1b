#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "visc/experiment.hpp"
#include "visc/solvers.hpp"

namespace visc {

/// Ordered key=value pairs applied on top of a config file.
using Overrides = std::vector<std::pair<std::string, std::string>>;

/// Keys accepted as overrides: theta, thetas, seed, seeds, nmax, algorithm,
/// stride, deterministic, epsilons, out.
[[nodiscard]] bool is_override_key(const std::string& key);

/// Splits "key=value". Configuration error on a missing '=' or unknown key.
[[nodiscard]] std::pair<std::string, std::string> parse_override(const std::string& text);

/// A fully validated configuration. Every block is built (from defaults when
/// absent); which one is used depends on the command.
struct ParsedConfig {
  std::optional<std::filesystem::path> source;
  Problem problem;
  bool benchmark = false;
  SolverConfig solver;
  std::size_t stride = 1;
  /// Set when the perturbation seed was drawn because the config left it open.
  bool seed_generated = false;
  ImplicitConfig implicit;
  /// The constant λ(t) of the implicit block.
  double implicit_lambda = 0.0;
  ExperimentConfig experiment;
  std::optional<std::filesystem::path> out;
  /// (field path, value) for every field filled from a default.
  std::vector<std::pair<std::string, std::string>> defaults;
};

/// Parses JSON config text. Errors are Configuration errors carrying the
/// line/column of a syntax error or the path of the offending field.
[[nodiscard]] ParsedConfig parse_config_text(const std::string& text, const Overrides& overrides = {},
                                             const std::string& origin = "<config>");

/// Reads and parses `path` (Io error when it cannot be read).
[[nodiscard]] ParsedConfig parse_config(const std::filesystem::path& path,
                                        const Overrides& overrides = {});

/// Keys of a metadata file that are informational only and skipped on replay.
[[nodiscard]] bool is_informational_meta_key(const std::string& key);

/// Key/value lines of a metadata file.
[[nodiscard]] Overrides parse_meta_text(const std::string& text);

}  // namespace visc
