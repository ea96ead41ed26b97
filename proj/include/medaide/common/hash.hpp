#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace medaide {

// Lowercase hex SHA-256 digest.
std::string sha256_hex(std::string_view data);

// First eight digest bytes, little-endian. Stable across platforms.
std::uint64_t stable_hash64(std::string_view data);

// Short form used in provenance records and session ids.
std::string short_hash(std::string_view data, std::size_t hex_chars = 16);

}  // namespace medaide
