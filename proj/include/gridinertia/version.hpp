#pragma once

#include <cstdint>
#include <string_view>

namespace gridinertia {

inline constexpr std::string_view toolkit_version = "0.3.1";

inline std::uint64_t fnv1a(std::string_view bytes, std::uint64_t h = 1469598103934665603ull) {
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace gridinertia
