// Apache License, Version 2.0, refer to LICENSE.txt

#pragma once

#include <cstdint>
#include <string_view>

namespace genrec {

// Identifies one logical substream: an entity kind plus its index, e.g.
// {"user", 17}. Distinct labels under the same master seed yield
// statistically independent streams.
struct StreamLabel {
  std::string_view kind;
  std::uint64_t index = 0;
};

// Deterministic pseudo-random stream (xoshiro256++ core). The state is
// derived by keyed hashing of (master_seed, label), so two streams built
// from equal inputs produce identical sequences and per-entity substreams
// can be consumed in parallel without coordination.
//
// Single-owner: movable, not copyable.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, StreamLabel label);

  RandomStream(const RandomStream&) = delete;
  RandomStream& operator=(const RandomStream&) = delete;
  RandomStream(RandomStream&&) = default;
  RandomStream& operator=(RandomStream&&) = default;

  std::uint64_t next_u64();

  // Uniform on [0, 1), 53-bit resolution.
  double next_double();

  // Uniform on the open interval (0, 1).
  double next_open();

  // Standard normal draw via the inverse CDF of next_open().
  double next_normal();

  // Unbiased uniform integer in [0, bound); bound must be > 0.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::uint64_t state_[4];
};

// 64-bit FNV-1a, used both for stream labels and content checksums.
std::uint64_t fnv1a64(std::string_view bytes);

}  // namespace genrec
