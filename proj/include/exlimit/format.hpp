#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <system_error>

namespace exlimit {

/// Shortest decimal representation that round-trips the double exactly
/// (at most 17 significant digits). Keeps every emitted file
/// byte-deterministic across runs and platforms with IEEE doubles.
inline std::string format_double(double value) {
  char buffer[32];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, ptr);
}

inline std::string format_int(std::int64_t value) {
  char buffer[24];
  const auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof(buffer), value);
  (void)ec;
  return std::string(buffer, ptr);
}

}  // namespace exlimit
