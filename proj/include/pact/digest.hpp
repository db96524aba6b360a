#pragma once

#include <cstdint>
#include <string>

namespace pact {

// FNV-1a 64-bit, used for trace digests.
inline uint64_t fnv1a64(const std::string& data) {
  uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string to_hex(uint64_t value);

}  // namespace pact
