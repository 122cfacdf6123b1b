#pragma once

#include <filesystem>
#include <string>
#include <string_view>

#include "visc/solvers.hpp"

namespace visc {

/// Shortest decimal text that parses back to exactly `v`.
[[nodiscard]] std::string format_double(double v);

/// CSV text of a trace: header `k,x1,...,xd,alpha,lambda,e_norm,rel_err`,
/// one line per recorded row. rel_err is empty when the run had no reference.
[[nodiscard]] std::string trace_csv(const RunTrace& trace);

/// `key=value` lines: algorithm, seed, prng, config_digest, iterations, warnings.
[[nodiscard]] std::string trace_metadata_text(const RunTrace& trace);

/// Writes `path` (CSV) and `path` + ".meta". Creates parent directories.
/// I/O failures raise an Io error naming the path.
void emit_trace(const RunTrace& trace, const std::filesystem::path& path);

/// Writes `content` to `path`, creating parent directories.
void write_text_file(const std::filesystem::path& path, std::string_view content);
[[nodiscard]] std::string read_text_file(const std::filesystem::path& path);

}  // namespace visc
