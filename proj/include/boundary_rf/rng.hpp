#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "boundary_rf/common.hpp"

namespace brf {

/// Philox-4x32-10 keyed block function (Salmon et al., "Parallel random
/// numbers: as easy as 1, 2, 3"). Counter-based: the output is a pure
/// function of (counter, key), so any substream can be generated out of
/// order and in parallel with bit-identical results.
std::array<std::uint32_t, 4> philox4x32(const std::array<std::uint32_t, 4>& counter,
                                        const std::array<std::uint32_t, 2>& key);

/// SplitMix64 finalizer; bijective 64-bit mix used for seed derivation.
std::uint64_t mix64(std::uint64_t x);

/// FNV-1a over the bytes of a tag string.
std::uint64_t hash_tag(std::string_view tag);

/// Pure derivation of a child seed from (master seed, stage name, index).
std::uint64_t derive_seed(std::uint64_t master, std::string_view stage, std::uint64_t index = 0);

/// One deterministic random stream. Streams are addressed by
/// (seed, tag, index): the tag partitions purposes (noise vs data vs
/// time draws), the index addresses one sample or one (sample, step)
/// cell. Draw order inside a stream is fixed; distinct streams never
/// overlap because the index occupies its own counter words.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::string_view tag, std::uint64_t index);

  std::uint32_t next_u32();
  std::uint64_t next_u64();

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform();

  /// Standard normal via Box-Muller (pairs cached).
  double normal();

  /// Vector of iid standard normals.
  Vec normal_vector(Index dim);

 private:
  std::array<std::uint32_t, 2> key_;
  std::array<std::uint32_t, 2> stream_;  // high counter words
  std::uint64_t block_ = 0;              // low counter words
  std::array<std::uint32_t, 4> buf_{};
  int buf_pos_ = 4;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

}  // namespace brf
