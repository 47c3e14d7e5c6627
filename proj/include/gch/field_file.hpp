#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "gch/field.hpp"

namespace gch {

/// Binary field file: "GCHF", u32 version, u32 H, u32 W, then H*W
/// little-endian IEEE-754 doubles in row-major order. All integers are
/// little-endian.
inline constexpr std::uint32_t kFieldFileVersion = 1;

std::vector<std::uint8_t> encode_field(const Field& field);
Field decode_field(std::span<const std::uint8_t> bytes);

void write_field_file(const std::filesystem::path& path, const Field& field);
Field read_field_file(const std::filesystem::path& path);

}  // namespace gch
