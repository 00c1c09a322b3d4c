#pragma once

#include <cstdint>

namespace ising {

// Counter-based 64-bit generator: output n is a pure function of
// (seed, stream, n), built from the SplitMix64 finalizer. Any consumer can
// reproduce any position of any stream without stepping through the rest,
// which is what keeps parallel and serial runs bit-identical.
class CounterRng {
 public:
  explicit CounterRng(uint64_t seed, uint64_t stream = 0) noexcept
      : key_(derive_key(seed, stream)) {}

  static uint64_t mix(uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  }

  uint64_t next_u64() noexcept {
    counter_ += 0x9e3779b97f4a7c15ull;
    return mix(key_ ^ counter_);
  }

  // Uniform in [0,1), 53-bit mantissa.
  double next_double() noexcept {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
  }

  // Uniform in [0,n) by 128-bit multiply; bias is O(n/2^64).
  uint64_t next_below(uint64_t n) noexcept {
    return static_cast<uint64_t>(
        (static_cast<unsigned __int128>(next_u64()) * n) >> 64);
  }

 private:
  static uint64_t derive_key(uint64_t seed, uint64_t stream) noexcept {
    return mix(mix(seed + 0x9e3779b97f4a7c15ull) ^
               mix(stream + 0xd1b54a32d192ed03ull));
  }

  uint64_t key_;
  uint64_t counter_ = 0;
};

// Stream ids, one per randomized operation. Substreams (per sample, per
// restart) are derived by adding an index to the base id.
namespace streams {
inline constexpr uint64_t kRegularPairing = 0x01;
inline constexpr uint64_t kErdosRenyi = 0x02;
inline constexpr uint64_t kConfigModel = 0x03;
inline constexpr uint64_t kTreeSample = 0x04;
inline constexpr uint64_t kVertexSample = 0x05;
inline constexpr uint64_t kPopulationStep = 0x100;  // + generation (or 0 for CRN)
inline constexpr uint64_t kBethePhi = 0x200;
inline constexpr uint64_t kEnergyDensity = 0x201;
inline constexpr uint64_t kGlauber = 0x300;
}  // namespace streams

}  // namespace ising
