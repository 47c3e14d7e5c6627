#include "gch/field_file.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <fstream>
#include <iterator>

#include "gch/error.hpp"

namespace gch {
namespace {

constexpr std::array<std::uint8_t, 4> kMagic = {'G', 'C', 'H', 'F'};
constexpr std::size_t kHeaderSize = 16;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(std::vector<std::uint8_t>& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

std::uint32_t get_u32(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(in[offset + i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::span<const std::uint8_t> in, std::size_t offset) {
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(in[offset + i]) << (8 * i);
  return v;
}

}  // namespace

std::vector<std::uint8_t> encode_field(const Field& field) {
  std::vector<std::uint8_t> out;
  out.reserve(kHeaderSize + 8 * field.size());
  for (std::uint8_t b : kMagic) out.push_back(b);
  put_u32(out, kFieldFileVersion);
  put_u32(out, static_cast<std::uint32_t>(field.height()));
  put_u32(out, static_cast<std::uint32_t>(field.width()));
  for (double v : field.values()) put_u64(out, std::bit_cast<std::uint64_t>(v));
  return out;
}

Field decode_field(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kHeaderSize) throw FormatError("field file: truncated header");
  if (!std::equal(kMagic.begin(), kMagic.end(), bytes.begin())) {
    throw FormatError("field file: bad magic");
  }
  const std::uint32_t version = get_u32(bytes, 4);
  if (version != kFieldFileVersion) throw FormatError("field file: unsupported version");
  const std::uint32_t h = get_u32(bytes, 8);
  const std::uint32_t w = get_u32(bytes, 12);
  const std::uint64_t count = static_cast<std::uint64_t>(h) * w;
  if (bytes.size() != kHeaderSize + 8 * count) {
    throw FormatError("field file: payload length does not match H*W");
  }
  std::vector<double> values(count);
  for (std::size_t i = 0; i < count; ++i) {
    values[i] = std::bit_cast<double>(get_u64(bytes, kHeaderSize + 8 * i));
  }
  return Field(static_cast<int>(h), static_cast<int>(w), std::move(values));
}

void write_field_file(const std::filesystem::path& path, const Field& field) {
  const auto bytes = encode_field(field);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error("write failed: " + path.string());
}

Field read_field_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                                  std::istreambuf_iterator<char>());
  return decode_field(bytes);
}

}  // namespace gch
