#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>
#include <span>

namespace gch {

/// SplitMix64 finalizer; used to derive stream identifiers.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Reproducible random stream identified by (seed, stream_id).
///
/// The engine is a Mersenne Twister seeded through std::seed_seq with the
/// four 32-bit halves of seed and stream_id, so the draw sequence is fully
/// determined by the pair and portable across standard libraries' seed_seq.
/// Child streams are derived with derive_id, which hashes the parent id and
/// the child index; workers in parallel Monte Carlo each get a child stream.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }

  /// Standard normal draw.
  double normal();
  /// Uniform draw on [0, 1).
  double uniform();
  /// True with probability p.
  bool bernoulli(double p) { return uniform() < p; }

  void fill_normal(std::span<double> out);

  /// Stream with the same seed and id derive_id(stream_id, child).
  RandomStream child(std::uint64_t child_index) const {
    return RandomStream(seed_, derive_id(stream_id_, child_index));
  }

  static std::uint64_t derive_id(std::uint64_t parent, std::uint64_t child) noexcept;
  static std::uint64_t derive_id(std::initializer_list<std::uint64_t> path) noexcept;

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace gch
