#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace visc {

/// 64-bit FNV-1a of `text`, rendered as 16 lowercase hex digits.
[[nodiscard]] inline std::string config_digest(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = kHex[h & 0xf];
    h >>= 4;
  }
  return out;
}

}  // namespace visc
