#pragma once

#include <cstdint>

namespace rolr {

/// splitmix64 finalizer.
constexpr std::uint64_t mix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

/// Counter-based stream: every draw is a pure function of (seed, index, lane),
/// so any sample of a stream can be regenerated without replaying the prefix.
class CounterRng {
 public:
  explicit constexpr CounterRng(std::uint64_t seed) : key_(mix64(seed ^ 0x5851f42d4c957f2dULL)) {}

  constexpr std::uint64_t bits(std::uint64_t index, std::uint32_t lane) const {
    return mix64(key_ ^ mix64(index * 8 + lane));
  }

  /// Uniform on [0, 1) with 53 random bits.
  constexpr double uniform(std::uint64_t index, std::uint32_t lane) const {
    return static_cast<double>(bits(index, lane) >> 11) * 0x1.0p-53;
  }

  /// Derives an independent child seed, e.g. one per replicate.
  constexpr std::uint64_t derive(std::uint64_t child) const {
    return mix64(key_ + mix64(child ^ 0xd1b54a32d192ed03ULL));
  }

 private:
  std::uint64_t key_;
};

}  // namespace rolr
