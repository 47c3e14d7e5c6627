#include "gch/random.hpp"

namespace gch {

std::uint64_t splitmix64(std::uint64_t x) noexcept {
  std::uint64_t z = x + 0x9e3779b97f4a7c15ull;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
  return z ^ (z >> 31);
}

namespace {

std::mt19937_64 make_engine(std::uint64_t seed, std::uint64_t stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  return std::mt19937_64(seq);
}

}  // namespace

RandomStream::RandomStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(make_engine(seed, stream_id)) {}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::uniform() { return uniform_(engine_); }

void RandomStream::fill_normal(std::span<double> out) {
  for (double& v : out) v = normal_(engine_);
}

std::uint64_t RandomStream::derive_id(std::uint64_t parent, std::uint64_t child) noexcept {
  return splitmix64(parent ^ splitmix64(child ^ 0xd1b54a32d192ed03ull));
}

std::uint64_t RandomStream::derive_id(std::initializer_list<std::uint64_t> path) noexcept {
  std::uint64_t id = 0;
  for (std::uint64_t step : path) id = derive_id(id, step);
  return id;
}

}  // namespace gch
