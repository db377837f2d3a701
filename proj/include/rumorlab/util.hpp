#pragma once

#include <bit>
#include <cstdint>
#include <string>

namespace rumorlab {

// ceil(log2(x)) for x >= 1.
inline int ceil_log2(std::uint64_t x) {
    return x <= 1 ? 0 : std::bit_width(x - 1);
}

// Writes content to path via a temp file plus rename, so readers never see a
// partial artifact. Throws std::runtime_error on I/O failure.
void write_text_atomic(const std::string& path, const std::string& content);

}  // namespace rumorlab
