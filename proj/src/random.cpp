// Apache License, Version 2.0, refer to LICENSE.txt

#include "genrec/random.hpp"

#include "genrec/errors.hpp"
#include "genrec/math_util.hpp"

namespace genrec {

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k) {
  return (x << k) | (x >> (64 - k));
}

// splitmix64 finalizer; also used to expand one key into the 256-bit state.
inline std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

inline std::uint64_t splitmix_next(std::uint64_t& x) {
  x += 0x9e3779b97f4a7c15ULL;
  return mix64(x);
}

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream::RandomStream(std::uint64_t master_seed, StreamLabel label) {
  std::uint64_t key = mix64(master_seed ^ 0x6a09e667f3bcc908ULL);
  key = mix64(key ^ fnv1a64(label.kind));
  key = mix64(key ^ label.index);
  state_[0] = splitmix_next(key);
  state_[1] = splitmix_next(key);
  state_[2] = splitmix_next(key);
  state_[3] = splitmix_next(key);
  if ((state_[0] | state_[1] | state_[2] | state_[3]) == 0) state_[0] = 1;
}

std::uint64_t RandomStream::next_u64() {
  const std::uint64_t result = rotl(state_[0] + state_[3], 23) + state_[0];
  const std::uint64_t t = state_[1] << 17;
  state_[2] ^= state_[0];
  state_[3] ^= state_[1];
  state_[1] ^= state_[2];
  state_[0] ^= state_[3];
  state_[2] ^= t;
  state_[3] = rotl(state_[3], 45);
  return result;
}

double RandomStream::next_double() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RandomStream::next_open() {
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::next_normal() { return inverse_normal_cdf(next_open()); }

std::uint64_t RandomStream::next_below(std::uint64_t bound) {
  if (bound == 0) throw ParameterError("next_below: bound must be > 0");
  const std::uint64_t threshold = (-bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

}  // namespace genrec
