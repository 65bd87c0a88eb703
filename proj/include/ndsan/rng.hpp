#pragma once

#include <cstdint>

namespace ndsan {

// Deterministic counter-derived random stream. Stream i's initial state is a
// strong 64-bit mix of (master_seed, i), so replication i can be generated
// independently of every other replication; the sequence itself advances as
// splitmix64. Equal (master_seed, stream_index) pairs always produce the
// same sequence.
class RngStream {
 public:
  RngStream(std::uint64_t master_seed, std::uint64_t stream_index) noexcept
      : state_(derive(master_seed, stream_index)) {}

  std::uint64_t next_u64() noexcept {
    state_ += 0x9e3779b97f4a7c15ull;
    return mix(state_);
  }

  // Uniform on [0, 1), 53 random bits.
  double next_unit() noexcept { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  static std::uint64_t mix(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  static std::uint64_t derive(std::uint64_t seed, std::uint64_t index) noexcept {
    return mix(seed + 0x9e3779b97f4a7c15ull * mix(index + 0x6a09e667f3bcc909ull));
  }

  std::uint64_t state_;
};

}  // namespace ndsan
