#include "visc/trace_io.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <sstream>

#include "visc/error.hpp"

namespace visc {

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  if (ec != std::errc{}) throw Error(ErrorKind::Io, "cannot format number");
  return std::string(buf.data(), end);
}

std::string trace_csv(const RunTrace& trace) {
  const std::size_t d = trace.final_x.dim();
  std::string out = "k";
  for (std::size_t i = 1; i <= d; ++i) out += ",x" + std::to_string(i);
  out += ",alpha,lambda,e_norm,rel_err\n";
  for (const TraceRow& row : trace.rows) {
    out += std::to_string(row.k);
    for (double v : row.x) out += "," + format_double(v);
    out += "," + format_double(row.alpha) + "," + format_double(row.lambda) + "," +
           format_double(row.e_norm) + ",";
    if (row.rel_err) out += format_double(*row.rel_err);
    out += "\n";
  }
  return out;
}

std::string trace_metadata_text(const RunTrace& trace) {
  const TraceMetadata& m = trace.metadata;
  std::ostringstream os;
  os << "algorithm=" << m.algorithm << "\n";
  os << "seed=" << (m.seed ? std::to_string(*m.seed) : std::string("none")) << "\n";
  os << "prng=" << m.prng << "\n";
  os << "config_digest=" << m.config_digest << "\n";
  os << "config=" << m.config << "\n";
  os << "iterations=" << m.iterations << "\n";
  os << "stopped_early=" << (m.stopped_early ? "true" : "false") << "\n";
  for (const Warning& w : m.warnings) {
    os << "warning=" << w.message << " (x" << w.count << ")\n";
  }
  return os.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view content) {
  std::error_code ec;
  if (path.has_parent_path()) {
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) {
      throw Error(ErrorKind::Io, "cannot create directory " + path.parent_path().string() + ": " +
                                     ec.message());
    }
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot open " + path.string() + " for writing");
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  if (!out) throw Error(ErrorKind::Io, "write failed for " + path.string());
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::Io, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit_trace(const RunTrace& trace, const std::filesystem::path& path) {
  if (trace.rows.empty()) throw Error(ErrorKind::Parameter, "emit_trace needs a nonempty trace");
  write_text_file(path, trace_csv(trace));
  std::filesystem::path meta = path;
  meta += ".meta";
  write_text_file(meta, trace_metadata_text(trace));
}

}  // namespace visc
