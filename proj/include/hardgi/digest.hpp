#pragma once

#include <cstdint>
#include <cstdio>
#include <string>
#include <string_view>

namespace hardgi {

/// FNV-1a over the bytes, as 16 lowercase hex digits.
inline std::string fnv1a64_hex(std::string_view bytes) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

/// "fnv1a64:<hex>", the digest recorded for instance files.
inline std::string file_digest(std::string_view bytes) { return "fnv1a64:" + fnv1a64_hex(bytes); }

}  // namespace hardgi
